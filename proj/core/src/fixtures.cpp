#include "rt/fixtures.hpp"

#include <algorithm>

#include "rt/errors.hpp"

namespace rt {

namespace {

std::string vertex(int k) { return "v" + std::to_string(k); }
std::string edge(int k) { return "e" + std::to_string(k); }

Word shifted(const Word& w, std::size_t by) {
    Word out = w;
    for (int& l : out) l = l > 0 ? l + static_cast<int>(by) : l - static_cast<int>(by);
    return out;
}

std::string pair_label(const std::string& x, const std::string& y) { return x + ":" + y; }

// Start vertex of the coarse edge containing fine position k.
int carrier_start(const std::vector<int>& coarse, int k) {
    int s = coarse.front();
    for (int c : coarse)
        if (c <= k) s = c;
    return s;
}

void check_vertices(const std::vector<int>& v) {
    if (v.empty() || v.front() != 0 || !std::is_sorted(v.begin(), v.end()) ||
        std::adjacent_find(v.begin(), v.end()) != v.end())
        throw ValidationError("circle vertices must be strictly increasing and start at 0");
}

// Fox derivative of r with respect to generator letter g (1-based).
std::vector<WordTerm> fox(const Word& r, int g) {
    std::vector<WordTerm> out;
    Word prefix;
    for (int l : r) {
        if (l == g) out.push_back({1, prefix});
        prefix.push_back(l);
        if (l == -g) out.push_back({-1, prefix});
    }
    return out;
}

}  // namespace

MorseData circle(const std::string& generator) {
    MorseData m;
    m.generators = {generator};
    m.cells = {{"p"}, {"q"}};
    m.incidences = {{"q", "p", {{1, {}}, {-1, {1}}}}};
    return m;
}

Representation circle_representation(int m, int rank) {
    const Backend g = Group::cyclic(m);
    return Representation(g, rank, {"g"}, {AlgebraElement::basis(g, m > 1 ? 1 : 0)});
}

MorseData circle_triangulation(const std::vector<int>& vertices, const std::string& generator) {
    check_vertices(vertices);
    MorseData m;
    m.generators = {generator};
    m.cells.resize(2);
    for (int k : vertices) {
        m.cells[0].push_back(vertex(k));
        m.cells[1].push_back(edge(k));
    }
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::string e = edge(vertices[i]);
        if (n == 1) {
            m.incidences.push_back({e, vertex(vertices[i]), {{1, {}}, {-1, {1}}}});
        } else {
            m.incidences.push_back({e, vertex(vertices[i]), {{1, {}}}});
            const bool wrap = i + 1 == n;
            m.incidences.push_back({e, vertex(vertices[wrap ? 0 : i + 1]), {{-1, wrap ? Word{1} : Word{}}}});
        }
    }
    return m;
}

MorseData circle_triangulation(int n, const std::string& generator) {
    if (n < 1) throw ValidationError("circle needs at least one vertex");
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = k;
    return circle_triangulation(v, generator);
}

CarrierMap circle_carriers(int n, const std::vector<int>& coarse) {
    check_vertices(coarse);
    if (coarse.back() >= n) throw ValidationError("coarse vertex outside the fine circle");
    CarrierMap c;
    for (int k = 0; k < n; ++k) {
        const int s = carrier_start(coarse, k);
        c[vertex(k)] = {s == k ? vertex(k) : edge(s), {}};
        c[edge(k)] = {edge(s), {}};
    }
    return c;
}

SubdivisionData circle_subdivision(int n, const std::vector<int>& coarse, const std::string& generator) {
    SubdivisionData s;
    s.fine = circle_triangulation(n, generator);
    s.coarse = circle_triangulation(coarse, generator);
    s.carriers = circle_carriers(n, coarse);
    for (int k : coarse) s.map.push_back({vertex(k), vertex(k), 1, {}});
    for (int k = 0; k < n; ++k) s.map.push_back({edge(carrier_start(coarse, k)), edge(k), 1, {}});
    return s;
}

MorseData product(const MorseData& a, const MorseData& b) {
    MorseData m;
    const std::size_t na = a.generators.size();
    m.generators = a.generators;
    m.generators.insert(m.generators.end(), b.generators.begin(), b.generators.end());
    for (std::size_t i = 0; i < m.generators.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (m.generators[i] == m.generators[j]) throw ValidationError("product factors share a generator name");
    m.relators = a.relators;
    for (const Word& r : b.relators) m.relators.push_back(shifted(r, na));
    for (std::size_t i = 1; i <= na; ++i)
        for (std::size_t j = 1; j <= b.generators.size(); ++j) {
            const int x = static_cast<int>(i), y = static_cast<int>(na + j);
            m.relators.push_back({x, y, -x, -y});
        }
    m.cells.resize(a.cells.size() + b.cells.size() - 1);
    for (std::size_t p = 0; p < a.cells.size(); ++p)
        for (std::size_t q = 0; q < b.cells.size(); ++q)
            for (const auto& x : a.cells[p])
                for (const auto& y : b.cells[q]) m.cells[p + q].push_back(pair_label(x, y));
    for (const Incidence& inc : a.incidences)
        for (const auto& level : b.cells)
            for (const auto& y : level) m.incidences.push_back({pair_label(inc.from, y), pair_label(inc.to, y), inc.terms});
    for (const Incidence& inc : b.incidences)
        for (std::size_t p = 0; p < a.cells.size(); ++p)
            for (const auto& x : a.cells[p]) {
                Incidence out{pair_label(x, inc.from), pair_label(x, inc.to), {}};
                for (const WordTerm& t : inc.terms)
                    out.terms.push_back({p % 2 == 0 ? t.count : -t.count, shifted(t.word, na)});
                m.incidences.push_back(std::move(out));
            }
    return m;
}

CarrierMap product(const CarrierMap& a, const CarrierMap& b, std::size_t generators_of_a) {
    CarrierMap c;
    for (const auto& [x, cx] : a)
        for (const auto& [y, cy] : b)
            c[pair_label(x, y)] = {pair_label(cx.cell, cy.cell), concat(cx.transport, shifted(cy.transport, generators_of_a))};
    return c;
}

SubdivisionData product(const SubdivisionData& a, const SubdivisionData& b) {
    SubdivisionData s;
    const std::size_t na = a.fine.generators.size();
    s.fine = product(a.fine, b.fine);
    s.coarse = product(a.coarse, b.coarse);
    s.carriers = product(a.carriers, b.carriers, na);
    for (const auto& ea : a.map)
        for (const auto& eb : b.map)
            s.map.push_back({pair_label(ea.coarse, eb.coarse), pair_label(ea.fine, eb.fine), ea.count * eb.count,
                             concat(ea.transport, shifted(eb.transport, na))});
    return s;
}

MorseData torus() { return product(circle("a"), circle("b")); }

Representation torus_representation(int m, int rank) {
    const Backend g = Group::product(*Group::cyclic(m), *Group::cyclic(m));
    const int one = m > 1 ? 1 : 0;
    return Representation(g, rank, {"a", "b"}, {AlgebraElement::basis(g, one * m), AlgebraElement::basis(g, one)});
}

MorseData genus2() {
    MorseData m;
    m.generators = {"a1", "b1", "a2", "b2"};
    const Word r = {1, 2, -1, -2, 3, 4, -3, -4};
    m.relators = {r};
    m.cells = {{"p"}, {"a1", "b1", "a2", "b2"}, {"s"}};
    for (int k = 1; k <= 4; ++k) {
        const std::string name = m.generators[static_cast<std::size_t>(k - 1)];
        m.incidences.push_back({name, "p", {{1, {k}}, {-1, {}}}});
        m.incidences.push_back({"s", name, fox(r, k)});
    }
    return m;
}

Representation genus2_representation() {
    const Backend g = Group::quaternion8();
    const AlgebraElement i = AlgebraElement::basis(g, g->index_of("i"));
    const AlgebraElement j = AlgebraElement::basis(g, g->index_of("j"));
    return Representation(g, 1, {"a1", "b1", "a2", "b2"}, {i, j, i, j});
}

std::map<std::string, double> circle_heights(int n) {
    std::map<std::string, double> h;
    h[vertex(0)] = 0.0;
    h[edge(0)] = 1.0;
    for (int j = 1; j < n; ++j) {
        h[vertex(j)] = 1.0 - (2.0 * j - 1.0) / (2.0 * n);
        h[edge(j)] = 1.0 - 2.0 * j / (2.0 * n);
    }
    return h;
}

std::map<std::string, double> product_heights(const std::map<std::string, double>& a,
                                              const std::map<std::string, double>& b) {
    std::map<std::string, double> h;
    for (const auto& [x, hx] : a)
        for (const auto& [y, hy] : b) h[pair_label(x, y)] = hx + hy;
    return h;
}

TransportGraph circle_transport_graph(int n) {
    TransportGraph g;
    for (int k = 0; k < n; ++k) g.points.push_back(vertex(k));
    std::vector<int> loop;
    for (int k = 0; k < n; ++k) {
        g.edges.push_back({vertex(k), vertex((k + 1) % n), k + 1 == n ? Word{1} : Word{}});
        loop.push_back(k + 1);
    }
    g.loops.push_back(loop);
    return g;
}

TransportGraph torus_transport_graph(int n1, int n2) {
    TransportGraph g;
    auto point = [](int i, int j) { return pair_label(vertex(i), vertex(j)); };
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) g.points.push_back(point(i, j));
    auto horizontal = [&](int i, int j) { return 1 + 2 * (i * n2 + j); };
    auto vertical = [&](int i, int j) { return 2 + 2 * (i * n2 + j); };
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            g.edges.push_back({point(i, j), point((i + 1) % n1, j), i + 1 == n1 ? Word{1} : Word{}});
            g.edges.push_back({point(i, j), point(i, (j + 1) % n2), j + 1 == n2 ? Word{2} : Word{}});
        }
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            g.loops.push_back({horizontal(i, j), vertical((i + 1) % n1, j), -horizontal(i, (j + 1) % n2), -vertical(i, j)});
    return g;
}

}  // namespace rt
