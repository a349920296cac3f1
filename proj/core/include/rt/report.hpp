#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rt {

struct Check {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string anchor;  // the identity being exercised
    std::string note;

    double residual() const;
};

// Passes when |value - reference| <= tolerance.
Check make_check(std::string name, double value, double reference, double tolerance, std::string anchor,
                 std::string note = {});
// A reported result that is not compared against anything.
Check make_result(std::string name, double value, std::string anchor, std::string note = {});

struct Report {
    std::string scenario;
    std::string subcommand;
    std::uint64_t hash = 0;
    std::uint64_t seed = 0;
    std::vector<Check> checks;

    bool all_pass() const;
};

// %.17g
std::string format_number(double v);
std::string hex64(std::uint64_t v);

void write_text(const Report& r, std::ostream& out);
// check,value,reference,residual,tolerance,pass,anchor,note
void write_csv(const Report& r, std::ostream& out);
// Writes both next to each other; throws std::runtime_error on I/O failure.
void emit_report(const Report& r, const std::string& text_path, const std::string& csv_path);

std::string csv_field(const std::string& s);

}  // namespace rt
