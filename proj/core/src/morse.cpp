#include "rt/morse.hpp"

#include <cmath>
#include <queue>
#include <sstream>

#include "rt/errors.hpp"

namespace rt {

namespace {

int generator_index(const std::string& name, const std::vector<std::string>& gens) {
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i] == name) return static_cast<int>(i);
    throw ParseError("unknown generator '" + name + "'");
}

std::vector<AlgebraElement> zero_entries(const Backend& g, int rows, int cols) {
    return std::vector<AlgebraElement>(static_cast<std::size_t>(rows * cols), AlgebraElement::zero(g));
}

// Diagonal copy of a 1x1 map at each of `rank` slots starting at (r0, c0).
void place(std::vector<AlgebraElement>& e, int cols, int r0, int c0, int rank, const AlgebraElement& a) {
    for (int k = 0; k < rank; ++k) e[static_cast<std::size_t>((r0 + k) * cols + c0 + k)] += a;
}

double rank_log_vol(const EquivariantMap& one_by_one, int rank) {
    return rank * log_vol(one_by_one);
}

}  // namespace

Word parse_word(const std::string& text, const std::vector<std::string>& generators) {
    std::string s = text;
    for (char& ch : s)
        if (ch == '*') ch = ' ';
    std::istringstream in(s);
    Word w;
    std::string tok;
    while (in >> tok) {
        if (tok == "1") continue;
        int power = 1;
        const auto caret = tok.find('^');
        std::string name = tok.substr(0, caret);
        if (caret != std::string::npos) {
            try {
                std::size_t used = 0;
                power = std::stoi(tok.substr(caret + 1), &used);
                if (used != tok.size() - caret - 1) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ParseError("bad exponent in word token '" + tok + "'");
            }
        }
        const int letter = generator_index(name, generators) + 1;
        for (int k = 0; k < std::abs(power); ++k) w.push_back(power > 0 ? letter : -letter);
    }
    return w;
}

std::string format_word(const Word& w, const std::vector<std::string>& generators) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += generators.at(static_cast<std::size_t>(std::abs(w[i]) - 1));
        if (w[i] < 0) out += "^-1";
    }
    return out;
}

Word inverse(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (int& l : out) l = -l;
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::pair<int, int> MorseData::locate(const std::string& cell) const {
    for (std::size_t q = 0; q < cells.size(); ++q)
        for (std::size_t i = 0; i < cells[q].size(); ++i)
            if (cells[q][i] == cell) return {static_cast<int>(q), static_cast<int>(i)};
    throw ValidationError("unknown cell '" + cell + "'");
}

bool MorseData::contains(const std::string& cell) const {
    for (const auto& level : cells)
        for (const auto& c : level)
            if (c == cell) return true;
    return false;
}

int MorseData::cell_count(int q) const {
    if (q < 0 || q >= static_cast<int>(cells.size())) return 0;
    return static_cast<int>(cells[static_cast<std::size_t>(q)].size());
}

MorseData reorient(const MorseData& m, const std::string& cell) {
    m.locate(cell);
    MorseData out = m;
    for (Incidence& inc : out.incidences)
        if (inc.from == cell || inc.to == cell)
            for (WordTerm& t : inc.terms) t.count = -t.count;
    return out;
}

Representation::Representation(Backend g, int rank, std::vector<std::string> generators,
                               std::vector<AlgebraElement> images)
    : g_(std::move(g)), rank_(rank), gens_(std::move(generators)), images_(std::move(images)) {
    if (rank_ < 1) throw ValidationError("representation rank must be positive");
    if (images_.size() != gens_.size()) throw ValidationError("one image per generator is required");
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (images_[i].backend() != g_) throw ValidationError("generator image lives on another backend");
        EquivariantMap m(g_, 1, 1, {images_[i]});
        if (la::singular_values(m.expanded()).minCoeff() < 1e-12)
            throw ValidationError("image of generator '" + gens_[i] + "' is not invertible");
        inverse_maps_.push_back(rt::inverse(m));
        maps_.push_back(std::move(m));
    }
}

EquivariantMap Representation::evaluate(const Word& w) const {
    EquivariantMap acc = EquivariantMap::identity(g_, 1);
    for (int l : w) {
        const auto k = static_cast<std::size_t>(std::abs(l) - 1);
        if (k >= maps_.size()) throw ValidationError("word uses an undeclared generator");
        acc = acc * (l > 0 ? maps_[k] : inverse_maps_[k]);
    }
    return acc;
}

EquivariantMap Representation::evaluate(const std::vector<WordTerm>& terms) const {
    EquivariantMap acc(g_, 1, 1);
    for (const WordTerm& t : terms) acc = acc + evaluate(t.word) * cplx(t.count);
    return acc;
}

void Representation::check_relators(const std::vector<Word>& relators, double tol) const {
    const EquivariantMap id = EquivariantMap::identity(g_, 1);
    for (const Word& r : relators) {
        const double err = (evaluate(r) - id).norm();
        if (err > tol)
            throw ValidationError("relator " + format_word(r, gens_) + " does not map to the identity (error " +
                                  std::to_string(err) + ")");
    }
}

double Representation::unimodularity_defect() const {
    double worst = 0.0;
    for (const EquivariantMap& m : maps_) worst = std::max(worst, std::abs(log_vol(m)));
    return worst;
}

Representation trivial_representation(const Backend& g, int rank, const std::vector<std::string>& generators) {
    return Representation(g, rank, generators, std::vector<AlgebraElement>(generators.size(), AlgebraElement::unit(g)));
}

EquivariantMap HermitianStructure::factor(const std::string& cell, const Backend& g, int rank) const {
    const auto it = b_.find(cell);
    if (it == b_.end()) return EquivariantMap::identity(g, rank);
    const AlgebraElement& b = it->second;
    if (b.backend() != g) throw ValidationError("Hermitian factor of '" + cell + "' lives on another backend");
    const Matrix x = expand(*g, b);
    if (!la::is_hermitian(x, 1e-12)) throw ValidationError("Hermitian factor of '" + cell + "' is not self-adjoint");
    const la::Eigensystem es = la::hermitian_eig(x);
    if (!(es.values.minCoeff() > 1e-12 * std::max(1.0, es.values.maxCoeff())))
        throw ValidationError("Hermitian factor of '" + cell + "' is not positive");
    return EquivariantMap::diagonal(std::vector<AlgebraElement>(static_cast<std::size_t>(rank), b));
}

EquivariantMap HermitianStructure::metric(const std::string& cell, const Backend& g, int rank) const {
    const EquivariantMap b = factor(cell, g, rank);
    return b.adjoint() * b;
}

HermitianStructure HermitianStructure::scaled(const std::string& cell, double c, const Backend& g) const {
    if (!(c > 0)) throw ValidationError("metric scale must be positive");
    HermitianStructure out = *this;
    const auto it = b_.find(cell);
    const AlgebraElement b = it == b_.end() ? AlgebraElement::unit(g) : it->second;
    out.set(cell, b * cplx(std::sqrt(c)));
    return out;
}

int cell_offset(const MorseData& m, const std::string& cell, int rank) { return m.locate(cell).second * rank; }

CochainComplex build_complex(const MorseData& m, const Representation& rho, const HermitianStructure& mu) {
    const Backend& g = rho.backend();
    const int r = rho.rank();
    if (m.generators != rho.generators()) throw ValidationError("representation and Morse data disagree on generators");
    rho.check_relators(m.relators);
    const int n = static_cast<int>(m.cells.size());
    std::vector<HilbertModule> modules;
    for (int q = 0; q < n; ++q) modules.push_back({g, m.cell_count(q) * r});

    std::vector<std::vector<AlgebraElement>> entries;
    for (int q = 0; q + 1 < n; ++q) entries.push_back(zero_entries(g, m.cell_count(q + 1) * r, m.cell_count(q) * r));
    for (const Incidence& inc : m.incidences) {
        const auto [qx, ix] = m.locate(inc.from);
        const auto [qy, iy] = m.locate(inc.to);
        if (qx != qy + 1) throw ValidationError("incidence " + inc.from + " -> " + inc.to + " does not lower the index by one");
        const EquivariantMap value = rho.evaluate(inc.terms);
        place(entries[static_cast<std::size_t>(qy)], m.cell_count(qy) * r, ix * r, iy * r, r, value.entry(0, 0));
    }
    std::vector<EquivariantMap> d;
    for (int q = 0; q + 1 < n; ++q)
        d.emplace_back(g, m.cell_count(q + 1) * r, m.cell_count(q) * r, std::move(entries[static_cast<std::size_t>(q)]));

    std::vector<std::optional<EquivariantMap>> metrics(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        bool twisted = false;
        for (const auto& c : m.cells[static_cast<std::size_t>(q)]) twisted = twisted || mu.has(c);
        if (!twisted) continue;
        std::vector<AlgebraElement> diag;
        for (const auto& c : m.cells[static_cast<std::size_t>(q)]) {
            const EquivariantMap gx = mu.metric(c, g, 1);
            for (int k = 0; k < r; ++k) diag.push_back(gx.entry(0, 0));
        }
        metrics[static_cast<std::size_t>(q)] = EquivariantMap::diagonal(diag);
    }
    return CochainComplex(std::move(modules), std::move(d), std::move(metrics));
}

double combinatorial_torsion(const MorseData& m, const Representation& rho, const HermitianStructure& mu) {
    return torsion(build_complex(m, rho, mu), TorsionMode::Lenient);
}

double relative_torsion(const Morphism& integration) { return cone_torsion(integration); }

CarrierMap identity_carriers(const MorseData& m) {
    CarrierMap out;
    for (const auto& level : m.cells)
        for (const auto& c : level) out[c] = Carrier{c, {}};
    return out;
}

double subdivision_weight(const MorseData& fine, const CarrierMap& tau1, const CarrierMap& tau2,
                          const Representation& rho, const HermitianStructure& mu) {
    const Backend& g = rho.backend();
    double omega = 0.0;
    for (std::size_t q = 0; q < fine.cells.size(); ++q) {
        for (const auto& x : fine.cells[q]) {
            const auto a = tau1.find(x), b = tau2.find(x);
            if (a == tau1.end() || b == tau2.end()) throw ValidationError("missing carrier for cell '" + x + "'");
            const EquivariantMap t = mu.factor(b->second.cell, g, 1) * rho.evaluate(b->second.transport) *
                                     rho.evaluate(inverse(a->second.transport)) *
                                     rt::inverse(mu.factor(a->second.cell, g, 1));
            omega += (q % 2 == 0 ? 1.0 : -1.0) * rank_log_vol(t, rho.rank());
        }
    }
    return omega;
}

double subdivision_weight(const SubdivisionData& s, const Representation& rho, const HermitianStructure& mu) {
    return subdivision_weight(s.fine, identity_carriers(s.fine), s.carriers, rho, mu);
}

Morphism subdivision_map(const SubdivisionData& s, const Representation& rho, const HermitianStructure& mu) {
    const Backend& g = rho.backend();
    const int r = rho.rank();
    CochainComplex fine = build_complex(s.fine, rho, mu);
    CochainComplex coarse = build_complex(s.coarse, rho, mu);
    const int n = std::max(fine.size(), coarse.size());
    std::vector<std::vector<AlgebraElement>> entries;
    for (int q = 0; q < n; ++q) entries.push_back(zero_entries(g, s.coarse.cell_count(q) * r, s.fine.cell_count(q) * r));
    for (const SubdivisionEntry& e : s.map) {
        const auto [qx, ix] = s.coarse.locate(e.coarse);
        const auto [qy, iy] = s.fine.locate(e.fine);
        if (qx != qy) throw ValidationError("subdivision entry " + e.fine + " -> " + e.coarse + " changes the index");
        const EquivariantMap value = rho.evaluate(e.transport) * cplx(e.count);
        place(entries[static_cast<std::size_t>(qx)], s.fine.cell_count(qx) * r, ix * r, iy * r, r, value.entry(0, 0));
    }
    std::vector<EquivariantMap> maps;
    for (int q = 0; q < n; ++q)
        maps.emplace_back(g, s.coarse.cell_count(q) * r, s.fine.cell_count(q) * r, std::move(entries[static_cast<std::size_t>(q)]));
    return Morphism(std::move(fine), std::move(coarse), std::move(maps));
}

std::map<std::string, double> V_function(const Representation& rho, const HermitianStructure& mu1,
                                         const HermitianStructure& mu2, const std::vector<std::string>& points) {
    const Backend& g = rho.backend();
    std::map<std::string, double> v;
    for (const auto& x : points) {
        const EquivariantMap id = mu2.factor(x, g, 1) * rt::inverse(mu1.factor(x, g, 1));
        v[x] = rank_log_vol(id, rho.rank());
    }
    return v;
}

std::vector<double> theta_cochain(const Representation& rho, const HermitianStructure& mu, const TransportGraph& graph) {
    const Backend& g = rho.backend();
    std::vector<double> theta;
    for (const auto& e : graph.edges) {
        const EquivariantMap t = mu.factor(e.to, g, 1) * rho.evaluate(e.transport) * rt::inverse(mu.factor(e.from, g, 1));
        theta.push_back(rank_log_vol(t, rho.rank()));
    }
    return theta;
}

std::vector<double> theta_loop_sums(const Representation& rho, const HermitianStructure& mu, const TransportGraph& graph) {
    const std::vector<double> theta = theta_cochain(rho, mu, graph);
    std::vector<double> sums;
    for (const auto& loop : graph.loops) {
        double s = 0.0;
        std::string start, at;
        for (std::size_t k = 0; k < loop.size(); ++k) {
            const int signed_edge = loop[k];
            const auto idx = static_cast<std::size_t>(std::abs(signed_edge) - 1);
            if (signed_edge == 0 || idx >= graph.edges.size()) throw ValidationError("loop refers to an unknown edge");
            const auto& e = graph.edges[idx];
            const std::string& tail = signed_edge > 0 ? e.from : e.to;
            const std::string& head = signed_edge > 0 ? e.to : e.from;
            if (k == 0) start = tail;
            else if (tail != at) throw ValidationError("loop is not a connected edge path");
            at = head;
            s += (signed_edge > 0 ? 1.0 : -1.0) * theta[idx];
        }
        if (at != start) throw ValidationError("loop does not close");
        sums.push_back(s);
    }
    return sums;
}

HermitianStructure unimodular_normalize(const Representation& rho, const HermitianStructure& mu,
                                        const TransportGraph& graph) {
    if (rho.unimodularity_defect() > 1e-10) throw ValidationError("representation is not unimodular");
    const Backend& g = rho.backend();
    const std::vector<double> theta = theta_cochain(rho, mu, graph);
    // Scaling mu by f at x shifts theta(x -> y) by rank/2 (log f_y - log f_x).
    std::map<std::string, std::vector<std::pair<std::string, double>>> adj;
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
        const auto& e = graph.edges[i];
        const double step = -2.0 * theta[i] / rho.rank();
        adj[e.from].push_back({e.to, step});
        adj[e.to].push_back({e.from, -step});
    }
    std::map<std::string, double> logf;
    for (const auto& root : graph.points) {
        if (logf.count(root)) continue;
        logf[root] = 0.0;
        std::queue<std::string> todo;
        todo.push(root);
        while (!todo.empty()) {
            const std::string x = todo.front();
            todo.pop();
            for (const auto& [y, step] : adj[x])
                if (!logf.count(y)) {
                    logf[y] = logf[x] + step;
                    todo.push(y);
                }
        }
    }
    HermitianStructure out = mu;
    for (const auto& [x, l] : logf) {
        const AlgebraElement b = mu.has(x) ? mu.factors().at(x) : AlgebraElement::unit(g);
        out.set(x, b * cplx(std::exp(0.5 * l)));
    }
    for (double t : theta_cochain(rho, out, graph))
        if (std::abs(t) > 1e-10)
            throw NumericalError("theta cannot be normalized: a loop of the transport graph has nonzero log volume");
    return out;
}

AnomalyResult hermitian_anomaly(const SubdivisionData& s, const Representation& rho, const HermitianStructure& mu1,
                                const HermitianStructure& mu2, bool strict) {
    const Backend& g = rho.backend();
    if (strict) {
        for (const auto& level : s.coarse.cells)
            for (const auto& x : level)
                if ((mu1.factor(x, g, 1) - mu2.factor(x, g, 1)).norm() > 1e-12)
                    throw ValidationError("Hermitian structures differ at critical cell '" + x + "'");
    }
    AnomalyResult out;
    out.lhs = cone_torsion(subdivision_map(s, rho, mu2)) - cone_torsion(subdivision_map(s, rho, mu1));
    auto identity_change = [&](const MorseData& m) {
        const CochainComplex a = build_complex(m, rho, mu1), b = build_complex(m, rho, mu2);
        std::vector<EquivariantMap> id;
        for (int q = 0; q < a.size(); ++q) id.push_back(EquivariantMap::identity(g, a.module(q).rank));
        return morphism_log_vol_sum(Morphism(a, b, std::move(id)));
    };
    out.critical_term = identity_change(s.coarse);
    out.surrogate_term = identity_change(s.fine);
    out.rhs = out.critical_term - out.surrogate_term;
    return out;
}

}  // namespace rt
