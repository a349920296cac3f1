#include "rt/driver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "rt/detclass.hpp"
#include "rt/errors.hpp"
#include "rt/fixtures.hpp"
#include "rt/random.hpp"

namespace rt {
namespace {

struct Context {
    const Scenario& s;
    const RunOptions& opt;
    Rng rng;
    std::vector<Check> checks;
    std::vector<Artifact>& artifacts;

    double tol(double base) const { return base * opt.tolerance_scale; }
    void check(std::string name, double value, double reference, double base_tol, std::string identity,
               std::string note = {}) {
        checks.push_back(make_check(std::move(name), value, reference, tol(base_tol), std::move(identity), std::move(note)));
    }
    void result(std::string name, double value, std::string identity, std::string note = {}) {
        checks.push_back(make_result(std::move(name), value, std::move(identity), std::move(note)));
    }
};

std::string label(const std::string& base, std::size_t index, std::size_t count) {
    return count > 1 ? base + "[" + std::to_string(index) + "]" : base;
}

std::string sweep_name(const std::string& sub, std::size_t index, std::size_t count) {
    return sub + "_sweep" + (count > 1 ? "_" + std::to_string(index) : std::string()) + ".csv";
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_number(v[i]);
    return out;
}

Representation representation_for(const Scenario& s, const TaskSpec& t, const MorseData& m) {
    if (t.has("representation")) return s.representation(t.str("representation"));
    return trivial_representation(s.backend(), static_cast<int>(t.num("rank", 1)), m.generators);
}

HermitianStructure hermitian_for(const Scenario& s, const TaskSpec& t, const std::string& key) {
    return t.has(key) ? s.hermitian(t.str(key)) : HermitianStructure{};
}

std::vector<int> int_list(const TaskSpec& t, const std::string& key, std::vector<double> fallback) {
    std::vector<int> out;
    for (double v : t.nums(key, std::move(fallback))) {
        if (v != std::floor(v)) throw ValidationError("field '" + key + "' must contain integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

void torsion_checks(Context& cx, const CochainComplex& c, const std::string& tag, const TaskSpec& t) {
    const bool acyclic = is_acyclic(c);
    const TorsionReport r = torsion_report(c, acyclic || cx.opt.strict ? TorsionMode::Strict : TorsionMode::Lenient);
    const std::string note = acyclic ? "acyclic" : "off-kernel, betti " + join(cohomology_dims(c));
    if (t.number.count("expect"))
        cx.check(tag + " torsion", r.value, t.num("expect", 0), t.num("tolerance", 1e-9), "torsion value", note);
    else
        cx.result(tag + " torsion", r.value, "torsion value", note);
    cx.check(tag + " formula agreement", r.formulas.discrepancy(), 0, 1e-9, "Laplacian, differential and zeta routes agree");
    if (acyclic) {
        cx.check(tag + " suspension", torsion(suspension(c)) + r.value, 0, 1e-9, "T(susp C) = -T(C)");
        cx.check(tag + " duality", torsion(dual(c)) - r.value, 0, 1e-9, "T(dual C) = T(C)");
        const UnitShift u = unit_shift_identity(c, -0.5);
        cx.check(tag + " unit shift", u.plain, 0, 1e-9, "log det(Delta + 1) alternating sum");
        cx.check(tag + " unit shift power", u.power, 0, 1e-9, "log det(Delta + (1 + Delta)^s) alternating sum");
    }
}

void cone_checks(Context& cx, const Morphism& f, const std::string& tag) {
    const double ct = cone_torsion(f);
    cx.check(tag + " cone Laplacian", cone_laplacian_check(f, 1), 0, 1e-9, "cone Laplacian block form");
    double lv = std::nan("");
    bool iso = true;
    for (int i = 0; i < f.source().size() && iso; ++i)
        iso = f.source().module(i).rank == f.target().module(i).rank;
    if (iso) {
        try {
            lv = morphism_log_vol_sum(f);
        } catch (const NumericalError&) {
            iso = false;
        }
    }
    if (iso)
        cx.check(tag + " cone torsion", ct, lv, 1e-9, "cone torsion of an isomorphism = alternating log vol");
    else
        cx.result(tag + " cone torsion", ct, "cone torsion");
}

void run_torsion(Context& cx) {
    const auto tasks = cx.s.tasks("torsion");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskSpec& t = tasks[i];
        torsion_checks(cx, cx.s.complex(t.str("complex")), label(t.str("complex"), i, 1), t);
    }
}

void run_cone(Context& cx) {
    const auto tasks = cx.s.tasks("cone");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskSpec& t = tasks[i];
        if (t.has("morphism")) {
            cone_checks(cx, cx.s.morphism(t.str("morphism")), t.str("morphism"));
            continue;
        }
        const int n = static_cast<int>(t.num("random", 4));
        double iso = 0, comp = 0;
        for (int k = 0; k < n; ++k) {
            const CochainComplex c = random_acyclic(cx.s.backend(), 5, 4, cx.rng, true);
            const Morphism f = random_isomorphism(c, cx.rng, true);
            iso = std::max(iso, std::abs(cone_torsion(f) - morphism_log_vol_sum(f)));
            const Morphism q1 = random_quasi_isomorphism(c, cx.rng, true);
            const Morphism q2 = random_quasi_isomorphism(q1.target(), cx.rng, true);
            comp = std::max(comp, composition_rule(q1, q2).residual());
        }
        const std::string tag = label("random", i, tasks.size());
        cx.check(tag + " isomorphism cone torsion", iso, 0, 1e-8, "cone torsion of an isomorphism = alternating log vol",
                 std::to_string(n) + " instances");
        cx.check(tag + " composition", comp, 0, 1e-8, "composition rule for quasi-isomorphisms",
                 std::to_string(n) + " instances");
    }
}

void run_milnor(Context& cx) {
    const auto tasks = cx.s.tasks("milnor");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskSpec& t = tasks[i];
        const int n = static_cast<int>(t.num("random", 4));
        double acyclic = 0, homology = 0;
        for (int k = 0; k < n; ++k) {
            const CochainComplex c1 = random_acyclic(cx.s.backend(), 5, 4, cx.rng, true);
            const CochainComplex c3 = random_acyclic(cx.s.backend(), 4, 4, cx.rng, true);
            acyclic = std::max(acyclic, milnor_identity(random_extension(c1, c3, cx.rng, true)).residual());
            const CochainComplex n1 = random_complex(cx.s.backend(), {1, 0, 1}, {1, 1}, cx.rng, true);
            const CochainComplex n3 = random_complex(cx.s.backend(), {0, 1, 1}, {2, 0}, cx.rng, true);
            homology = std::max(homology, milnor_identity(random_extension(n1, n3, cx.rng, true)).residual());
        }
        const std::string tag = label("random", i, tasks.size());
        cx.check(tag + " acyclic extensions", acyclic, 0, 1e-8, "multiplicativity in short exact sequences",
                 std::to_string(n) + " instances");
        cx.check(tag + " extensions with homology", homology, 0, 1e-8,
                 "multiplicativity with the long exact sequence term", std::to_string(n) + " instances");
    }
}

void run_cmm(Context& cx) {
    const auto tasks = cx.s.tasks("cmm");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskSpec& t = tasks[i];
        const int n = static_cast<int>(t.num("random", 3));
        const std::vector<double> grid = t.nums("grid", {0.25, 0.5, 0.75});
        double add = 0, deriv = 0, a41 = 0, eps = 0;
        for (int k = 0; k < n; ++k) {
            const CochainComplex c1 = random_acyclic(cx.s.backend(), 4, 3, cx.rng, true);
            const CochainComplex c3 = random_acyclic(cx.s.backend(), 4, 3, cx.rng, true);
            const ShortExactSequence seq = random_extension(c1, c3, cx.rng, true);
            add = std::max(add, cmm_additivity(seq).residual());
            const DeformationProbe p = cmm_deformation_probe(seq, grid);
            deriv = std::max(deriv, p.max_derivative);
            a41 = std::max(a41, p.max_a41);
            eps = std::max(eps, p.max_epsilon);
        }
        const std::string tag = label("random", i, tasks.size());
        const std::string note = std::to_string(n) + " instances";
        cx.check(tag + " additivity", add, 0, 1e-8, "torsion additive along the split deformation", note);
        cx.check(tag + " derivative", deriv, 0, 1e-6, "derivative of the deformed torsion vanishes", note);
        cx.check(tag + " block identity", a41, 0, 1e-9, "lower-left block identity", note);
        cx.check(tag + " epsilon", eps, 0, 1e-9, "epsilon term vanishes", note);
    }
}

void run_morse(Context& cx) {
    const auto tasks = cx.s.tasks("morse");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskSpec& t = tasks[i];
        const std::string tag = t.str("morse");
        const MorseData& m = cx.s.morse(tag);
        const Representation rho = representation_for(cx.s, t, m);
        const HermitianStructure mu = hermitian_for(cx.s, t, "hermitian");
        const CochainComplex c = build_complex(m, rho, mu);
        const double value = cx.opt.strict ? torsion(c, TorsionMode::Strict) : combinatorial_torsion(m, rho, mu);
        const std::string note = "betti " + join(cohomology_dims(c));
        if (t.number.count("expect"))
            cx.check(tag + " torsion", value, t.num("expect", 0), t.num("tolerance", 1e-9), "twisted torsion value", note);
        else
            cx.result(tag + " torsion", value, "twisted torsion value", note);
        const std::string top = m.cells.back().front();
        cx.check(tag + " reorientation", combinatorial_torsion(reorient(m, top), rho, mu), value, 1e-10,
                 "torsion independent of cell orientation", "flipped " + top);
        cx.result(tag + " unimodularity defect", rho.unimodularity_defect(), "max |log vol rho(g)|");
    }
}

void run_anomaly(Context& cx) {
    const auto tasks = cx.s.tasks("anomaly");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskSpec& t = tasks[i];
        const std::string tag = t.str("subdivision");
        const SubdivisionData& sd = cx.s.subdivision(tag);
        const Representation rho = representation_for(cx.s, t, sd.fine);
        const HermitianStructure mu1 = hermitian_for(cx.s, t, "mu1");
        const HermitianStructure mu2 = hermitian_for(cx.s, t, "mu2");
        const bool strict = cx.opt.strict || t.num("strict", 0) != 0;

        const Morphism a1 = subdivision_map(sd, rho, mu1);
        cx.check(tag + " subdivision torsion", cone_torsion(a1), subdivision_weight(sd, rho, mu1), 1e-9,
                 "cone torsion of the subdivision map = carrier weight");
        const AnomalyResult r = hermitian_anomaly(sd, rho, mu1, mu2, strict);
        cx.check(tag + " anomaly", r.lhs, r.rhs, 1e-9, "change of relative torsion under a new Hermitian structure",
                 "critical " + format_number(r.critical_term) + ", surrogate " + format_number(r.surrogate_term));

        std::vector<std::string> points;
        for (const auto& cells : sd.fine.cells) points.insert(points.end(), cells.begin(), cells.end());
        const auto v12 = V_function(rho, mu1, mu2, points), v21 = V_function(rho, mu2, mu1, points);
        double anti = 0;
        for (const auto& p : points) anti = std::max(anti, std::abs(v12.at(p) + v21.at(p)));
        cx.check(tag + " V antisymmetry", anti, 0, 1e-12, "V(mu1, mu2) = -V(mu2, mu1)");
    }
}

void run_witten(Context& cx) {
    const auto tasks = cx.s.tasks("witten");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskSpec& t = tasks[i];
        const std::string tag = t.str("subdivision");
        const SubdivisionData& sd = cx.s.subdivision(tag);
        const Representation rho = representation_for(cx.s, t, sd.fine);
        const HermitianStructure mu = hermitian_for(cx.s, t, "hermitian");
        const Morphism a = subdivision_map(sd, rho, mu);
        const HeightOperator h = height_operator(sd.fine, cx.s.heights(t.str("heights")), rho.backend(), rho.rank());

        const AffineCheck ac = affine_check(a, h, t.nums("grid", {0, 1, 2, 3, 4, 5}));
        cx.check(tag + " affine second difference", ac.max_second_difference, 0, 1e-8, "log R(t) affine in t");
        cx.check(tag + " slope", ac.slope, ac.expected_slope, 1e-8, "slope = alternating trace of h");
        cx.result(tag + " intercept", ac.intercept, "log R(0)");
        for (double st : t.nums("split", {})) {
            const SplitResult r = split_additivity(a, h, st);
            cx.check(tag + " split t=" + format_number(st), r.residual(), 0, 1e-8,
                     "log R(t) = small part + large part",
                     "small dims " + join(r.split.small_dims) + (r.split.threshold_moved ? ", threshold moved" : ""));
        }
        const auto rows = witten_sweep(a, h, t.nums("sweep", t.nums("grid", {0, 1, 2, 3, 4, 5})), cx.opt.threads);
        std::ostringstream csv;
        csv << "t,total,sm,la,slope_residual\n";
        for (const SweepRow& r : rows)
            csv << format_number(r.t) << ',' << format_number(r.total) << ',' << format_number(r.sm) << ','
                << format_number(r.la) << ',' << format_number(r.slope_residual) << '\n';
        cx.artifacts.push_back({sweep_name("witten", i, tasks.size()), csv.str()});
    }
}

void run_detclass(Context& cx) {
    const auto tasks = cx.s.tasks("detclass");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskSpec& t = tasks[i];
        const Family f{t.str("family"), t.num("parameter", 1.0)};
        const std::vector<int> grids = int_list(t, "grids", {64, 128, 256, 512, 1024});
        const std::string tag = f.name;
        const DivergenceResult d = divergence_probe(f, grids, t.num("probe_tolerance", 0.05));
        const std::string verdict = to_string(d.verdict);
        const std::string note = "verdict " + verdict + ", values " + join(d.values);
        if (t.text.count("expect"))
            cx.checks.push_back(make_check(tag + " verdict", verdict == t.str("expect") ? 1 : 0, 1, 0,
                                           "determinant class probe", note + ", expected " + t.str("expect")));
        else
            cx.result(tag + " partial log det", d.values.back(), "determinant class probe", note);

        const auto rows = detclass_sweep(f, grids, cx.opt.threads);
        if (t.number.count("reference"))
            cx.check(tag + " torsion at n=" + std::to_string(rows.back().n), rows.back().circle_torsion,
                     t.num("reference", 0), t.num("tolerance", 0.02), "grid torsion limit");
        std::ostringstream csv;
        csv << "n,partial_logdet,circle_torsion\n";
        for (const DetclassRow& r : rows)
            csv << r.n << ',' << format_number(r.partial_logdet) << ',' << format_number(r.circle_torsion) << '\n';
        cx.artifacts.push_back({sweep_name("detclass", i, tasks.size()), csv.str()});
    }
}

void run_selftest(Context& cx) {
    const TaskSpec t = cx.s.has_tasks("selftest") ? cx.s.tasks("selftest").front() : TaskSpec{};
    const int m = static_cast<int>(t.num("order", 5));
    const int n = static_cast<int>(t.num("vertices", 4));
    if (m < 1 || n < 2) throw ValidationError("selftest needs order >= 1 and vertices >= 2");
    const Representation rho = circle_representation(m);
    const Backend& g = rho.backend();

    cx.check("circle torsion", combinatorial_torsion(circle(), rho), m > 1 ? std::log(double(m)) / m : 0, 1e-10,
             "circle with holonomy of order m: log(m)/m");

    const CochainComplex c = random_acyclic(g, 4, 3, cx.rng, true);
    torsion_checks(cx, c, "random", TaskSpec{});
    cone_checks(cx, random_isomorphism(c, cx.rng, true), "random");
    {
        const CochainComplex c3 = random_acyclic(g, 4, 3, cx.rng, true);
        cx.check("milnor", milnor_identity(random_extension(c, c3, cx.rng, true)).residual(), 0, 1e-8,
                 "multiplicativity in short exact sequences");
    }

    const SubdivisionData sd = circle_subdivision(n, {0});
    HermitianStructure mu1, mu2;
    mu1.set("v1", AlgebraElement::unit(g, 1.5));
    mu2 = mu1.scaled("v1", 2.0, g).scaled("e1", 0.5, g);
    cx.check("subdivision torsion", cone_torsion(subdivision_map(sd, rho, mu1)), subdivision_weight(sd, rho, mu1), 1e-9,
             "cone torsion of the subdivision map = carrier weight");
    const AnomalyResult an = hermitian_anomaly(sd, rho, mu1, mu2, true);
    cx.check("anomaly", an.lhs, an.rhs, 1e-9, "change of relative torsion under a new Hermitian structure");

    const TransportGraph graph = circle_transport_graph(n);
    const HermitianStructure flat = unimodular_normalize(rho, mu1, graph);
    double theta = 0;
    for (double v : theta_cochain(rho, flat, graph)) theta = std::max(theta, std::abs(v));
    cx.check("parallel structure", theta, 0, 1e-12, "normalized structure has vanishing theta");

    const HeightOperator h = height_operator(sd.fine, circle_heights(n), g, 1);
    const AffineCheck ac = affine_check(subdivision_map(sd, rho, mu1), h, {0, 1, 2, 3, 4, 5});
    cx.check("witten slope", ac.slope, ac.expected_slope, 1e-8, "slope = alternating trace of h");
    cx.check("witten affine", ac.max_second_difference, 0, 1e-8, "log R(t) affine in t");
    cx.check("witten split", split_additivity(subdivision_map(sd, rho, mu1), h, 3.0).residual(), 0, 1e-8,
             "log R(t) = small part + large part");

    const ScalingTorsion st = scaling_torsion({1, 1}, 1, 1, 1.0);
    cx.check("scaling torsion", st.direct, -st.closed_form, 1e-12, "scaling factors against closed form");

    cx.check("constant symbol", circle_torsion(sample({"constant", std::exp(-1.0)}, 64)), -1.0, 1e-12,
             "constant multiplication operator");
}

using Runner = std::function<void(Context&)>;

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> r = {
        {"torsion", run_torsion}, {"cone", run_cone},       {"milnor", run_milnor},   {"cmm", run_cmm},
        {"morse", run_morse},     {"anomaly", run_anomaly}, {"witten", run_witten},   {"detclass", run_detclass},
        {"selftest", run_selftest}};
    return r;
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"torsion", "cone",    "milnor",   "cmm",     "morse",
                                                   "anomaly", "witten",  "detclass", "selftest"};
    return names;
}

Report run_checks(const Scenario& s, const RunOptions& opt, std::vector<Artifact>& artifacts) {
    const auto it = runners().find(opt.subcommand);
    if (it == runners().end()) throw ParseError("unknown subcommand '" + opt.subcommand + "'");
    if (opt.subcommand != "selftest" && !s.has_tasks(opt.subcommand))
        throw ValidationError("scenario has no tasks for '" + opt.subcommand + "'");
    if (!(opt.tolerance_scale > 0)) throw ParseError("tolerance scale must be positive");
    if (opt.threads < 1) throw ParseError("thread count must be positive");

    const std::uint64_t seed = opt.seed.value_or(s.seed());
    Context cx{s, opt, Rng(seed), {}, artifacts};
    it->second(cx);
    return Report{s.name(), opt.subcommand, s.hash(), seed, std::move(cx.checks)};
}

int run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const Scenario s = Scenario::load(opt.scenario_path);
        std::vector<Artifact> artifacts;
        const Report r = run_checks(s, opt, artifacts);

        namespace fs = std::filesystem;
        const fs::path dir(opt.out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        emit_report(r, (dir / (opt.subcommand + "_report.txt")).string(), (dir / (opt.subcommand + "_report.csv")).string());
        for (const Artifact& a : artifacts) {
            std::ofstream f(dir / a.file, std::ios::binary);
            f << a.content;
            if (!f) throw std::runtime_error("cannot write " + (dir / a.file).string());
        }
        write_text(r, out);
        return r.all_pass() ? 0 : 1;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rt
