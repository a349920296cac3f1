#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rt/witten.hpp"

namespace rt {

// Scalar, string and numeric-list parameters of one task entry.
struct TaskSpec {
    std::map<std::string, std::string> text;
    std::map<std::string, double> number;
    std::map<std::string, std::vector<double>> list;

    bool has(const std::string& key) const { return text.count(key) || number.count(key) || list.count(key); }
    const std::string& str(const std::string& key) const;
    double num(const std::string& key, double fallback) const;
    std::vector<double> nums(const std::string& key, std::vector<double> fallback) const;
};

// A parsed and validated scenario file; see docs/scenario_format.md.
class Scenario {
public:
    static Scenario load(const std::string& path);
    static Scenario parse(const std::string& text);

    const std::string& name() const;
    std::uint64_t hash() const;
    std::uint64_t seed() const;
    const Backend& backend() const;

    const CochainComplex& complex(const std::string& name) const;
    const Morphism& morphism(const std::string& name) const;
    const MorseData& morse(const std::string& name) const;
    const Representation& representation(const std::string& name) const;
    const HermitianStructure& hermitian(const std::string& name) const;
    const SubdivisionData& subdivision(const std::string& name) const;
    const std::map<std::string, double>& heights(const std::string& name) const;
    std::vector<TaskSpec> tasks(const std::string& subcommand) const;
    bool has_tasks(const std::string& subcommand) const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

// "scalar", "cyclic:m", "symmetric3", "quaternion8" or a product "A x B".
Backend backend_by_name(const std::string& spec);

}  // namespace rt
