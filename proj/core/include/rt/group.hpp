#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rt/linalg.hpp"

namespace rt {

// A finite group given by its multiplication table; order one is the scalar backend.
class Group {
public:
    // Validates closure, identity, inverses and (exhaustively up to order 64) associativity.
    Group(std::string name, std::vector<std::string> labels, std::vector<std::vector<int>> table,
          int identity);

    static std::shared_ptr<const Group> scalar();
    static std::shared_ptr<const Group> cyclic(int m);
    static std::shared_ptr<const Group> symmetric3();
    static std::shared_ptr<const Group> quaternion8();
    static std::shared_ptr<const Group> product(const Group& a, const Group& b);

    int order() const { return static_cast<int>(labels_.size()); }
    int identity() const { return identity_; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inverse_[a]; }
    const std::string& name() const { return name_; }
    const std::string& label(int g) const { return labels_[g]; }
    const std::vector<std::string>& labels() const { return labels_; }
    // Returns -1 if absent.
    int index_of(const std::string& label) const;
    bool is_scalar() const { return order() == 1; }

private:
    std::string name_;
    std::vector<std::string> labels_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int identity_;
};

using Backend = std::shared_ptr<const Group>;

// Finite sum of complex multiples of group elements.
class AlgebraElement {
public:
    explicit AlgebraElement(Backend g);
    AlgebraElement(Backend g, std::vector<cplx> coeffs);

    static AlgebraElement zero(Backend g) { return AlgebraElement(std::move(g)); }
    static AlgebraElement unit(Backend g, cplx c = 1.0);
    static AlgebraElement basis(Backend g, int element, cplx c = 1.0);

    const Backend& backend() const { return g_; }
    cplx operator[](int element) const { return c_[element]; }
    cplx& operator[](int element) { return c_[element]; }
    const std::vector<cplx>& coeffs() const { return c_; }

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator-() const;
    AlgebraElement operator*(cplx s) const;
    // Group-algebra convolution: (a*b)_{gh} += a_g b_h.
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement& operator+=(const AlgebraElement& o);

    // sum conj(c_g) g^{-1}
    AlgebraElement star() const;
    // Coefficient of the identity: the normalized trace.
    cplx trace() const { return c_[g_->identity()]; }
    double norm() const;
    bool is_zero(double tol = 0.0) const;

private:
    Backend g_;
    std::vector<cplx> c_;
};

}  // namespace rt
