#pragma once

#include <map>
#include <string>
#include <vector>

#include "rt/cone.hpp"

namespace rt {

// A word in the generators of a finitely presented group. Letter k > 0 is generator k-1,
// letter -k its inverse.
using Word = std::vector<int>;

// Parses "a b^-1 a^2" (spaces or '*' separate letters; "" and "1" are the empty word).
Word parse_word(const std::string& text, const std::vector<std::string>& generators);
std::string format_word(const Word& w, const std::vector<std::string>& generators);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);

struct WordTerm {
    int count = 1;
    Word word;
};

struct Incidence {
    std::string from;  // cell of index q+1
    std::string to;    // cell of index q
    std::vector<WordTerm> terms;
};

// Critical cells per index with group-ring incidence numbers.
struct MorseData {
    std::vector<std::string> generators;
    std::vector<Word> relators;
    std::vector<std::vector<std::string>> cells;
    std::vector<Incidence> incidences;

    int top_index() const { return static_cast<int>(cells.size()) - 1; }
    // (index, position) of a cell; throws ValidationError if unknown.
    std::pair<int, int> locate(const std::string& cell) const;
    bool contains(const std::string& cell) const;
    int cell_count(int q) const;
};

// Negates every incidence touching `cell`: a change of orientation of that cell.
MorseData reorient(const MorseData& m, const std::string& cell);

// Generator images acting diagonally on l^2(G)^rank.
class Representation {
public:
    Representation(Backend g, int rank, std::vector<std::string> generators, std::vector<AlgebraElement> images);

    const Backend& backend() const { return g_; }
    int rank() const { return rank_; }
    const std::vector<std::string>& generators() const { return gens_; }
    const AlgebraElement& image(int generator) const { return images_[static_cast<std::size_t>(generator)]; }

    // 1x1 operator of a word: the composite of its letters in reading order.
    EquivariantMap evaluate(const Word& w) const;
    EquivariantMap evaluate(const std::vector<WordTerm>& terms) const;
    // Throws ValidationError unless every relator evaluates to the identity.
    void check_relators(const std::vector<Word>& relators, double tol = 1e-10) const;
    // max over generators of |log vol rho(g)|.
    double unimodularity_defect() const;

private:
    Backend g_;
    int rank_;
    std::vector<std::string> gens_;
    std::vector<AlgebraElement> images_;
    std::vector<EquivariantMap> maps_, inverse_maps_;
};

// Sends every generator to the identity.
Representation trivial_representation(const Backend& g, int rank, const std::vector<std::string>& generators);

// mu_x(u, v) = <B_x u, B_x v>; cells without an entry use B_x = 1.
class HermitianStructure {
public:
    HermitianStructure() = default;
    explicit HermitianStructure(std::map<std::string, AlgebraElement> factors) : b_(std::move(factors)) {}

    void set(const std::string& cell, AlgebraElement b) { b_.insert_or_assign(cell, std::move(b)); }
    bool has(const std::string& cell) const { return b_.count(cell) > 0; }
    // B_x as a rank x rank diagonal operator.
    EquivariantMap factor(const std::string& cell, const Backend& g, int rank) const;
    EquivariantMap metric(const std::string& cell, const Backend& g, int rank) const;
    // mu scaled by c > 0 at one cell.
    HermitianStructure scaled(const std::string& cell, double c, const Backend& g) const;
    const std::map<std::string, AlgebraElement>& factors() const { return b_; }

private:
    std::map<std::string, AlgebraElement> b_;
};

CochainComplex build_complex(const MorseData& m, const Representation& rho, const HermitianStructure& mu = {});
// Index of the first basis slot of `cell` in its degree.
int cell_offset(const MorseData& m, const std::string& cell, int rank);
// Off-kernel torsion of the twisted complex.
double combinatorial_torsion(const MorseData& m, const Representation& rho, const HermitianStructure& mu = {});

// log R for a quasi-isomorphism Int from a surrogate complex into a combinatorial one.
double relative_torsion(const Morphism& integration);

// T_{x, x_j}: the cell of tau_j carrying x and the transport word from x to it.
struct Carrier {
    std::string cell;
    Word transport;
};
using CarrierMap = std::map<std::string, Carrier>;

struct SubdivisionEntry {
    std::string coarse;
    std::string fine;
    int count = 1;
    Word transport;  // from the fine cell to the coarse one
};

// A fine triangulation tau_0, a coarser tau with Cr(tau) among the cells of tau_0,
// carriers of the fine cells in tau and the integration map A : C(tau_0) -> C(tau).
struct SubdivisionData {
    MorseData fine;
    MorseData coarse;
    CarrierMap carriers;
    std::vector<SubdivisionEntry> map;
};

// Every cell carried by itself with empty transport.
CarrierMap identity_carriers(const MorseData& m);

// omega_{tau1, tau2} = sum_x (-1)^{index x} log vol(T^2_{x,x2} o (T^1_{x,x1})^{-1}) over the cells of `fine`.
double subdivision_weight(const MorseData& fine, const CarrierMap& tau1, const CarrierMap& tau2,
                          const Representation& rho, const HermitianStructure& mu);
// omega_{tau_0, tau} for the pair in s.
double subdivision_weight(const SubdivisionData& s, const Representation& rho, const HermitianStructure& mu);
Morphism subdivision_map(const SubdivisionData& s, const Representation& rho, const HermitianStructure& mu);

// Fiber points joined by transports; loops lists closed edge paths (signed 1-based edge indices).
struct TransportGraph {
    struct Edge {
        std::string from;
        std::string to;
        Word transport;
    };
    std::vector<std::string> points;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> loops;
};

// V(x) = log vol(Id : (E_x, mu1) -> (E_x, mu2)) at every point.
std::map<std::string, double> V_function(const Representation& rho, const HermitianStructure& mu1,
                                         const HermitianStructure& mu2, const std::vector<std::string>& points);
// theta(x -> y) = log vol of the transport E_x -> E_y measured in mu; one value per edge.
std::vector<double> theta_cochain(const Representation& rho, const HermitianStructure& mu, const TransportGraph& graph);
// Signed sum of theta around each declared loop.
std::vector<double> theta_loop_sums(const Representation& rho, const HermitianStructure& mu, const TransportGraph& graph);
// Rescales mu by a positive scalar per point so that theta vanishes on every edge.
HermitianStructure unimodular_normalize(const Representation& rho, const HermitianStructure& mu,
                                        const TransportGraph& graph);

struct AnomalyResult {
    double lhs = 0.0;        // log R(mu2) - log R(mu1)
    double rhs = 0.0;        // critical_term - surrogate_term
    double critical_term = 0.0;
    double surrogate_term = 0.0;
    double residual() const { return std::abs(lhs - rhs); }
};
// Change of relative torsion of the integration map of s under mu1 -> mu2. With strict set,
// mu1 and mu2 must agree on the cells of the coarse complex.
AnomalyResult hermitian_anomaly(const SubdivisionData& s, const Representation& rho, const HermitianStructure& mu1,
                                const HermitianStructure& mu2, bool strict = true);

}  // namespace rt
