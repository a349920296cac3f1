#include "rt/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rt/errors.hpp"
#include "rt/fixtures.hpp"

namespace rt {

using json = nlohmann::json;

struct Scenario::Impl {
    std::string name;
    std::uint64_t hash = 0;
    std::uint64_t seed = 0;
    Backend backend;
    std::map<std::string, CochainComplex> complexes;
    std::map<std::string, Morphism> morphisms;
    std::map<std::string, MorseData> morse;
    std::map<std::string, Representation> representations;
    std::map<std::string, HermitianStructure> hermitian;
    std::map<std::string, SubdivisionData> subdivisions;
    std::map<std::string, std::map<std::string, double>> heights;
    std::map<std::string, std::vector<TaskSpec>> tasks;
};

namespace {

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& key, const char* kind) {
    const auto it = m.find(key);
    if (it == m.end()) throw ValidationError(std::string("unknown ") + kind + " '" + key + "'");
    return it->second;
}

cplx number(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw ParseError("expected a number or [re, im], got " + j.dump());
}

AlgebraElement element(const json& j, const Backend& g) {
    if (j.is_string()) {
        const int k = g->index_of(j.get<std::string>());
        if (k < 0) throw ParseError("unknown group element '" + j.get<std::string>() + "'");
        return AlgebraElement::basis(g, k);
    }
    if (j.is_object()) {
        AlgebraElement a = AlgebraElement::zero(g);
        for (const auto& [label, c] : j.items()) {
            const int k = g->index_of(label);
            if (k < 0) throw ParseError("unknown group element '" + label + "'");
            a[k] += number(c);
        }
        return a;
    }
    return AlgebraElement::unit(g, number(j));
}

EquivariantMap matrix(const json& j, const Backend& g, int rows, int cols, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + " must be an array of rows");
    if (rows == 0 || cols == 0) {
        if (!j.empty() && !(j.size() == static_cast<std::size_t>(rows) && rows > 0))
            throw ValidationError(what + " has the wrong shape");
        return EquivariantMap(g, rows, cols);
    }
    if (j.size() != static_cast<std::size_t>(rows)) throw ValidationError(what + " has the wrong number of rows");
    std::vector<AlgebraElement> e;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(cols))
            throw ValidationError(what + " has a row of the wrong length");
        for (const auto& x : row) e.push_back(element(x, g));
    }
    return EquivariantMap(g, rows, cols, std::move(e));
}

std::vector<int> int_list(const json& j) {
    std::vector<int> out;
    if (j.is_number_integer()) {
        for (int k = 0; k < j.get<int>(); ++k) out.push_back(k);
        return out;
    }
    for (const auto& x : j) out.push_back(x.get<int>());
    return out;
}

std::string word_text(const json& j) { return j.is_null() ? std::string("1") : j.get<std::string>(); }

CochainComplex parse_complex(const json& j, const Backend& g) {
    const std::vector<int> ranks = j.at("ranks").get<std::vector<int>>();
    std::vector<HilbertModule> modules;
    for (int r : ranks) {
        if (r < 0) throw ValidationError("module ranks must be non-negative");
        modules.push_back({g, r});
    }
    std::vector<EquivariantMap> d;
    const json diffs = j.value("differentials", json::array());
    if (diffs.size() + 1 != ranks.size() && !(ranks.empty() && diffs.empty()))
        throw ValidationError("a complex needs one differential fewer than modules");
    for (std::size_t i = 0; i < diffs.size(); ++i)
        d.push_back(matrix(diffs[i], g, ranks[i + 1], ranks[i], "differential " + std::to_string(i)));
    std::vector<std::optional<EquivariantMap>> metrics;
    if (j.contains("metrics")) {
        const json& ms = j.at("metrics");
        if (ms.size() != ranks.size()) throw ValidationError("one metric entry per module is required");
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (ms[i].is_null()) metrics.emplace_back(std::nullopt);
            else metrics.emplace_back(matrix(ms[i], g, ranks[i], ranks[i], "metric " + std::to_string(i)));
        }
    }
    return CochainComplex(std::move(modules), std::move(d), std::move(metrics));
}

MorseData parse_morse(const json& j) {
    if (j.contains("fixture")) {
        const std::string f = j.at("fixture").get<std::string>();
        const std::string gen = j.value("generator", std::string("g"));
        if (f == "circle") return circle(gen);
        if (f == "circle_triangulation") return circle_triangulation(int_list(j.at("vertices")), gen);
        if (f == "torus") return torus();
        if (f == "torus_triangulation") {
            const json& v = j.at("vertices");
            return product(circle_triangulation(int_list(v.at(0)), "a"), circle_triangulation(int_list(v.at(1)), "b"));
        }
        if (f == "genus2") return genus2();
        throw ParseError("unknown Morse fixture '" + f + "'");
    }
    MorseData m;
    m.generators = j.value("generators", std::vector<std::string>{});
    for (const auto& r : j.value("relators", json::array())) m.relators.push_back(parse_word(r.get<std::string>(), m.generators));
    m.cells = j.at("cells").get<std::vector<std::vector<std::string>>>();
    for (const auto& inc : j.value("incidences", json::array())) {
        Incidence x{inc.at("from").get<std::string>(), inc.at("to").get<std::string>(), {}};
        for (const auto& t : inc.at("terms")) {
            if (!t.is_array() || t.size() != 2) throw ParseError("incidence terms are [count, word] pairs");
            x.terms.push_back({t[0].get<int>(), parse_word(word_text(t[1]), m.generators)});
        }
        m.locate(x.from);
        m.locate(x.to);
        m.incidences.push_back(std::move(x));
    }
    return m;
}

Representation parse_representation(const json& j, const Backend& g) {
    const auto gens = j.at("generators").get<std::vector<std::string>>();
    const json images = j.value("images", json::object());
    std::vector<AlgebraElement> img;
    for (const auto& name : gens) {
        if (!images.contains(name)) throw ValidationError("no image for generator '" + name + "'");
        img.push_back(element(images.at(name), g));
    }
    return Representation(g, j.value("rank", 1), gens, std::move(img));
}

HermitianStructure parse_hermitian(const json& j, const Backend& g) {
    HermitianStructure mu;
    for (const auto& [cell, b] : j.items()) mu.set(cell, element(b, g));
    return mu;
}

SubdivisionData parse_subdivision(const json& j, const std::map<std::string, MorseData>& morse) {
    if (j.contains("fixture")) {
        const std::string f = j.at("fixture").get<std::string>();
        if (f == "circle")
            return circle_subdivision(j.at("vertices").get<int>(), int_list(j.at("coarse")), j.value("generator", std::string("g")));
        if (f == "torus") {
            const auto v = j.at("vertices").get<std::vector<int>>();
            const json& c = j.at("coarse");
            if (v.size() != 2 || c.size() != 2) throw ParseError("torus subdivision needs two vertex counts and two coarse lists");
            return product(circle_subdivision(v[0], int_list(c[0]), "a"), circle_subdivision(v[1], int_list(c[1]), "b"));
        }
        throw ParseError("unknown subdivision fixture '" + f + "'");
    }
    SubdivisionData s;
    s.fine = lookup(morse, j.at("fine").get<std::string>(), "Morse data");
    s.coarse = lookup(morse, j.at("coarse").get<std::string>(), "Morse data");
    for (const auto& [cell, c] : j.at("carriers").items()) {
        s.fine.locate(cell);
        const std::string target = c.at("cell").get<std::string>();
        s.coarse.locate(target);
        s.carriers[cell] = {target, parse_word(word_text(c.value("transport", json())), s.fine.generators)};
    }
    for (const auto& e : j.at("map"))
        s.map.push_back({e.at("coarse").get<std::string>(), e.at("fine").get<std::string>(), e.value("count", 1),
                         parse_word(word_text(e.value("transport", json())), s.fine.generators)});
    return s;
}

std::map<std::string, double> parse_heights(const json& j) {
    if (j.contains("fixture")) {
        const std::string f = j.at("fixture").get<std::string>();
        if (f == "circle") return circle_heights(j.at("vertices").get<int>());
        if (f == "torus") {
            const auto v = j.at("vertices").get<std::vector<int>>();
            if (v.size() != 2) throw ParseError("torus heights need two vertex counts");
            return product_heights(circle_heights(v[0]), circle_heights(v[1]));
        }
        throw ParseError("unknown height fixture '" + f + "'");
    }
    return j.at("values").get<std::map<std::string, double>>();
}

const json& section(const json& j, const char* key) {
    static const json empty = json::object();
    const auto it = j.find(key);
    return it == j.end() ? empty : *it;
}

TaskSpec parse_task(const json& j) {
    if (!j.is_object()) throw ParseError("task entries must be objects");
    TaskSpec t;
    for (const auto& [k, v] : j.items()) {
        if (v.is_string()) t.text[k] = v.get<std::string>();
        else if (v.is_number()) t.number[k] = v.get<double>();
        else if (v.is_boolean()) t.number[k] = v.get<bool>() ? 1.0 : 0.0;
        else if (v.is_array()) t.list[k] = v.get<std::vector<double>>();
        else throw ParseError("unsupported value for task field '" + k + "'");
    }
    return t;
}

}  // namespace

const std::string& TaskSpec::str(const std::string& key) const {
    const auto it = text.find(key);
    if (it == text.end()) throw ValidationError("task is missing field '" + key + "'");
    return it->second;
}

double TaskSpec::num(const std::string& key, double fallback) const {
    const auto it = number.find(key);
    return it == number.end() ? fallback : it->second;
}

std::vector<double> TaskSpec::nums(const std::string& key, std::vector<double> fallback) const {
    const auto it = list.find(key);
    return it == list.end() ? fallback : it->second;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Backend backend_by_name(const std::string& spec) {
    const auto cross = spec.find(" x ");
    if (cross != std::string::npos)
        return Group::product(*backend_by_name(spec.substr(0, cross)), *backend_by_name(spec.substr(cross + 3)));
    if (spec == "scalar") return Group::scalar();
    if (spec == "symmetric3") return Group::symmetric3();
    if (spec == "quaternion8") return Group::quaternion8();
    if (spec.rfind("cyclic:", 0) == 0) {
        int m = 0;
        try {
            m = std::stoi(spec.substr(7));
        } catch (const std::exception&) {
            throw ParseError("bad cyclic order in backend '" + spec + "'");
        }
        if (m < 1 || m > 64) throw ValidationError("cyclic backends are limited to orders 1..64");
        return Group::cyclic(m);
    }
    throw ParseError("unknown backend '" + spec + "'");
}

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read scenario '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Scenario Scenario::parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("scenario must be a JSON object");
    static const std::vector<std::string> known = {"name", "seed", "backend", "complexes", "morphisms", "morse",
                                                   "representations", "hermitian", "subdivisions", "heights", "tasks"};
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ParseError("unknown scenario field '" + k + "'");

    auto impl = std::make_shared<Impl>();
    try {
        impl->name = j.value("name", std::string("scenario"));
        impl->hash = fnv1a(text);
        impl->seed = j.value("seed", std::uint64_t{0});
        const json& b = j.value("backend", json("scalar"));
        if (b.is_string()) {
            impl->backend = backend_by_name(b.get<std::string>());
        } else {
            const auto labels = b.at("labels").get<std::vector<std::string>>();
            std::vector<std::vector<int>> table;
            for (const auto& row : b.at("table")) {
                std::vector<int> r;
                for (const auto& x : row) {
                    if (x.is_string()) {
                        const auto it = std::find(labels.begin(), labels.end(), x.get<std::string>());
                        if (it == labels.end()) throw ParseError("unknown label in group table");
                        r.push_back(static_cast<int>(it - labels.begin()));
                    } else {
                        r.push_back(x.get<int>());
                    }
                }
                table.push_back(std::move(r));
            }
            const auto id = std::find(labels.begin(), labels.end(), b.at("identity").get<std::string>());
            if (id == labels.end()) throw ValidationError("identity is not among the labels");
            impl->backend = std::make_shared<const Group>(b.value("name", std::string("inline")), labels, table,
                                                          static_cast<int>(id - labels.begin()));
        }
        const Backend& g = impl->backend;
        for (const auto& [k, v] : section(j, "complexes").items()) impl->complexes.emplace(k, parse_complex(v, g));
        for (const auto& [k, v] : section(j, "morphisms").items()) {
            const CochainComplex& src = lookup(impl->complexes, v.at("source").get<std::string>(), "complex");
            const CochainComplex& tgt = lookup(impl->complexes, v.at("target").get<std::string>(), "complex");
            std::vector<EquivariantMap> maps;
            const json ms = v.value("maps", json::array());
            const int n = std::max(src.size(), tgt.size());
            if (ms.size() > static_cast<std::size_t>(n)) throw ValidationError("morphism '" + k + "' has too many components");
            for (int i = 0; i < n; ++i) {
                const int rows = tgt.module(i).rank, cols = src.module(i).rank;
                maps.push_back(i < static_cast<int>(ms.size()) ? matrix(ms[static_cast<std::size_t>(i)], g, rows, cols, "map")
                                                               : EquivariantMap(g, rows, cols));
            }
            impl->morphisms.emplace(k, Morphism(src, tgt, std::move(maps)));
        }
        for (const auto& [k, v] : section(j, "morse").items()) impl->morse.emplace(k, parse_morse(v));
        for (const auto& [k, v] : section(j, "representations").items())
            impl->representations.emplace(k, parse_representation(v, g));
        for (const auto& [k, v] : section(j, "hermitian").items()) impl->hermitian.emplace(k, parse_hermitian(v, g));
        for (const auto& [k, v] : section(j, "subdivisions").items())
            impl->subdivisions.emplace(k, parse_subdivision(v, impl->morse));
        for (const auto& [k, v] : section(j, "heights").items()) impl->heights.emplace(k, parse_heights(v));
        for (const auto& [k, v] : section(j, "tasks").items()) {
            std::vector<TaskSpec> list;
            if (v.is_array())
                for (const auto& t : v) list.push_back(parse_task(t));
            else
                list.push_back(parse_task(v));
            impl->tasks[k] = std::move(list);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed scenario: ") + e.what());
    }
    Scenario s;
    s.impl_ = std::move(impl);
    return s;
}

const std::string& Scenario::name() const { return impl_->name; }
std::uint64_t Scenario::hash() const { return impl_->hash; }
std::uint64_t Scenario::seed() const { return impl_->seed; }
const Backend& Scenario::backend() const { return impl_->backend; }
const CochainComplex& Scenario::complex(const std::string& n) const { return lookup(impl_->complexes, n, "complex"); }
const Morphism& Scenario::morphism(const std::string& n) const { return lookup(impl_->morphisms, n, "morphism"); }
const MorseData& Scenario::morse(const std::string& n) const { return lookup(impl_->morse, n, "Morse data"); }
const Representation& Scenario::representation(const std::string& n) const {
    return lookup(impl_->representations, n, "representation");
}
const HermitianStructure& Scenario::hermitian(const std::string& n) const {
    return lookup(impl_->hermitian, n, "Hermitian structure");
}
const SubdivisionData& Scenario::subdivision(const std::string& n) const {
    return lookup(impl_->subdivisions, n, "subdivision");
}
const std::map<std::string, double>& Scenario::heights(const std::string& n) const {
    return lookup(impl_->heights, n, "height function");
}
std::vector<TaskSpec> Scenario::tasks(const std::string& subcommand) const {
    const auto it = impl_->tasks.find(subcommand);
    return it == impl_->tasks.end() ? std::vector<TaskSpec>{} : it->second;
}
bool Scenario::has_tasks(const std::string& subcommand) const { return impl_->tasks.count(subcommand) > 0; }

}  // namespace rt
