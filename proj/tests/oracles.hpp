#pragma once

// Reference values computed without the library's spectral machinery.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "rt/morse.hpp"

namespace oracle {

// (1/m) sum_{k=1}^{m-1} log|1 - e^{2 pi i k/m}|, which the cyclotomic identity puts at log(m)/m.
inline double cyclotomic_log_vol(int m) {
    double s = 0;
    for (int k = 1; k < m; ++k) s += std::log(std::abs(1.0 - std::polar(1.0, 2 * std::numbers::pi * k / m)));
    return s / m;
}

// Cl_2(theta) = sum_k sin(k theta)/k^2, summed in blocks of the period when theta = 2 pi p/q.
inline double clausen(double theta, int terms = 400000) {
    double s = 0;
    for (int k = terms; k >= 1; --k) s += std::sin(k * theta) / (double(k) * k);
    return s;
}

// Mahler measure of z - 1: by Jensen's formula log max(1, |1|) = 0.
inline double mahler_measure_z_minus_1() { return 0.0; }

// Integral of log|e^{2 pi i x} - 1| over the set where it is <= 1, i.e. x in [0, 1/6] u [5/6, 1].
inline double partial_symbol_integral() { return -clausen(std::numbers::pi / 3) / std::numbers::pi; }

// sum_q (-1)^q rank sum_{cells of index q} h(cell)
inline double alternating_height_trace(const rt::MorseData& m, const std::map<std::string, double>& h, int rank) {
    double s = 0;
    for (std::size_t q = 0; q < m.cells.size(); ++q)
        for (const auto& cell : m.cells[q]) {
            const auto it = h.find(cell);
            s += (q % 2 ? -1.0 : 1.0) * rank * (it == h.end() ? 0.0 : it->second);
        }
    return s;
}

// Rank of a complex matrix by Gaussian elimination with partial pivoting.
inline int rank(std::vector<std::vector<std::complex<double>>> a, double tol = 1e-9) {
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    int r = 0;
    for (std::size_t c = 0; c < cols && static_cast<std::size_t>(r) < rows; ++c) {
        std::size_t piv = static_cast<std::size_t>(r);
        for (std::size_t i = piv; i < rows; ++i)
            if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
        if (std::abs(a[piv][c]) < tol) continue;
        std::swap(a[piv], a[static_cast<std::size_t>(r)]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == static_cast<std::size_t>(r)) continue;
            const auto f = a[i][c] / a[static_cast<std::size_t>(r)][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[static_cast<std::size_t>(r)][j];
        }
        ++r;
    }
    return r;
}

// Betti numbers (over C, divided by m^2) of the m x m periodic grid torus with the standard cell
// structure, i.e. the regular Z/m x Z/m cover of the torus. Cells: vertices (i, j), horizontal
// edges (i, j)->(i+1, j), vertical edges (i, j)->(i, j+1), squares with corner (i, j).
inline std::vector<double> grid_torus_betti(int m) {
    const int n = m * m;
    auto id = [m](int i, int j) { return ((i % m + m) % m) * m + ((j % m + m) % m); };
    using Row = std::vector<std::complex<double>>;
    std::vector<Row> d0(2 * static_cast<std::size_t>(n), Row(static_cast<std::size_t>(n)));
    std::vector<Row> d1(static_cast<std::size_t>(n), Row(2 * static_cast<std::size_t>(n)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const auto h = static_cast<std::size_t>(id(i, j)), v = static_cast<std::size_t>(n + id(i, j));
            d0[h][static_cast<std::size_t>(id(i + 1, j))] += 1.0;
            d0[h][static_cast<std::size_t>(id(i, j))] -= 1.0;
            d0[v][static_cast<std::size_t>(id(i, j + 1))] += 1.0;
            d0[v][static_cast<std::size_t>(id(i, j))] -= 1.0;
            // boundary of the square: h(i,j) + v(i+1,j) - h(i,j+1) - v(i,j)
            auto& row = d1[static_cast<std::size_t>(id(i, j))];
            row[h] += 1.0;
            row[static_cast<std::size_t>(n + id(i + 1, j))] += 1.0;
            row[static_cast<std::size_t>(id(i, j + 1))] -= 1.0;
            row[v] -= 1.0;
        }
    const int r0 = rank(d0), r1 = rank(d1);
    return {double(n - r0) / n, double(2 * n - r0 - r1) / n, double(n - r1) / n};
}

}  // namespace oracle
