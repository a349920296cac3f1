#include "rt/group.hpp"

#include <array>
#include <cmath>

#include "rt/errors.hpp"

namespace rt {

Group::Group(std::string name, std::vector<std::string> labels, std::vector<std::vector<int>> table,
             int identity)
    : name_(std::move(name)), labels_(std::move(labels)), table_(std::move(table)), identity_(identity) {
    const int n = order();
    if (n == 0) throw ValidationError("group must have at least one element");
    if (static_cast<int>(table_.size()) != n) throw ValidationError("multiplication table has wrong size");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n) throw ValidationError("multiplication table has wrong size");
        for (int v : row)
            if (v < 0 || v >= n) throw ValidationError("multiplication table entry out of range");
    }
    if (identity_ < 0 || identity_ >= n) throw ValidationError("identity index out of range");
    for (int a = 0; a < n; ++a)
        if (table_[identity_][a] != a || table_[a][identity_] != a)
            throw ValidationError("identity element does not act trivially");
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (table_[a][b] == identity_ && table_[b][a] == identity_) inverse_[a] = b;
    for (int a = 0; a < n; ++a)
        if (inverse_[a] < 0) throw ValidationError("element " + labels_[a] + " has no inverse");
    const int stride = n <= 64 ? 1 : n / 16 + 1;
    for (int a = 0; a < n; a += stride)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; c += stride)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw ValidationError("multiplication table is not associative");
}

int Group::index_of(const std::string& label) const {
    for (int i = 0; i < order(); ++i)
        if (labels_[i] == label) return i;
    return -1;
}

Backend Group::scalar() { return std::make_shared<const Group>("scalar", std::vector<std::string>{"e"},
                                                               std::vector<std::vector<int>>{{0}}, 0); }

Backend Group::cyclic(int m) {
    if (m < 1) throw ValidationError("cyclic group order must be positive");
    std::vector<std::string> labels(m);
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a) {
        labels[a] = a == 0 ? "e" : a == 1 ? "g" : "g^" + std::to_string(a);
        for (int b = 0; b < m; ++b) table[a][b] = (a + b) % m;
    }
    return std::make_shared<const Group>("cyclic-" + std::to_string(m), labels, table, 0);
}

Backend Group::symmetric3() {
    const std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
    const std::vector<std::string> labels = {"e", "(12)", "(13)", "(23)", "(123)", "(132)"};
    std::vector<std::vector<int>> table(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            std::array<int, 3> c{};
            for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
            for (int k = 0; k < 6; ++k)
                if (perms[k] == c) table[a][b] = k;
        }
    return std::make_shared<const Group>("symmetric-3", labels, table, 0);
}

Backend Group::quaternion8() {
    // Element 2u+s is (-1)^s * unit u with units 1, i, j, k.
    const std::vector<std::string> labels = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
    const int unit_prod[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    const int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::vector<std::vector<int>> table(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            const int ua = a / 2, ub = b / 2;
            const int s = (a % 2 + b % 2 + unit_sign[ua][ub]) % 2;
            table[a][b] = 2 * unit_prod[ua][ub] + s;
        }
    return std::make_shared<const Group>("quaternion-8", labels, table, 0);
}

Backend Group::product(const Group& a, const Group& b) {
    const int na = a.order(), nb = b.order();
    std::vector<std::string> labels(na * nb);
    std::vector<std::vector<int>> table(na * nb, std::vector<int>(na * nb));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) labels[i * nb + j] = "(" + a.label(i) + "," + b.label(j) + ")";
    for (int x = 0; x < na * nb; ++x)
        for (int y = 0; y < na * nb; ++y)
            table[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
    return std::make_shared<const Group>(a.name() + "x" + b.name(), labels, table,
                                         a.identity() * nb + b.identity());
}

AlgebraElement::AlgebraElement(Backend g) : g_(std::move(g)), c_(static_cast<std::size_t>(g_->order()), 0.0) {}

AlgebraElement::AlgebraElement(Backend g, std::vector<cplx> coeffs) : g_(std::move(g)), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != g_->order())
        throw ValidationError("algebra element has wrong number of coefficients");
}

AlgebraElement AlgebraElement::unit(Backend g, cplx c) {
    const int e = g->identity();
    return basis(std::move(g), e, c);
}

AlgebraElement AlgebraElement::basis(Backend g, int element, cplx c) {
    AlgebraElement a(std::move(g));
    a.c_.at(static_cast<std::size_t>(element)) = c;
    return a;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    AlgebraElement r = *this;
    r += o;
    return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const { return *this + (-o); }

AlgebraElement AlgebraElement::operator-() const { return *this * cplx(-1.0); }

AlgebraElement AlgebraElement::operator*(cplx s) const {
    AlgebraElement r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    AlgebraElement r(g_);
    const int n = g_->order();
    for (int a = 0; a < n; ++a) {
        if (c_[a] == 0.0) continue;
        for (int b = 0; b < n; ++b) r.c_[g_->mul(a, b)] += c_[a] * o.c_[b];
    }
    return r;
}

AlgebraElement AlgebraElement::star() const {
    AlgebraElement r(g_);
    for (int a = 0; a < g_->order(); ++a) r.c_[g_->inv(a)] = std::conj(c_[a]);
    return r;
}

double AlgebraElement::norm() const {
    double s = 0.0;
    for (auto v : c_) s += std::norm(v);
    return std::sqrt(s);
}

bool AlgebraElement::is_zero(double tol) const { return norm() <= tol; }

}  // namespace rt
