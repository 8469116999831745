#pragma once

// Independent reference implementations used as test oracles.

#include "macgof/mac_stat.hpp"
#include "macgof/sample_space.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace oracle {

inline double euclid(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline macgof::CellCounts counts(const macgof::PairedSample& s, const macgof::Location& li,
                                 const macgof::Location& lj) {
    const double rx = euclid(li.w, lj.w);
    const double ry = euclid(li.v, lj.v);
    macgof::CellCounts c;
    for (std::size_t r = 0; r < s.size(); ++r) {
        const bool a = euclid(s.x(r), li.w) <= rx;
        const bool b = euclid(s.y(r), li.v) <= ry;
        if (a && b) ++c.c11;
        else if (b) ++c.c12;
        else if (a) ++c.c21;
        else ++c.c22;
    }
    return c;
}

inline double local(const macgof::CellCounts& p, const macgof::CellCounts& q) {
    const auto a = p.as_array();
    const auto b = q.as_array();
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double r = static_cast<double>(a[i] + b[i]);
        if (r > 0) s += (a[i] - b[i]) * static_cast<double>(a[i] - b[i]) / r;
    }
    return s;
}

struct MacOracle {
    double value = 0.0;
    double mean = 0.0;
    std::size_t pairs = 0;
};

inline MacOracle mac(const macgof::PairedSample& a, const macgof::PairedSample& b, const macgof::LocationSet& locs,
                     bool both_orders) {
    MacOracle out;
    double sum = 0.0;
    for (std::size_t i = 0; i < locs.size(); ++i) {
        for (std::size_t j = 0; j < locs.size(); ++j) {
            if (i == j || (!both_orders && j < i)) continue;
            if (euclid(locs[i].w, locs[j].w) == 0.0 && euclid(locs[i].v, locs[j].v) == 0.0) continue;
            const double s = local(counts(a, locs[i], locs[j]), counts(b, locs[i], locs[j]));
            out.value = std::max(out.value, s);
            sum += s;
            ++out.pairs;
        }
    }
    out.mean = out.pairs ? sum / static_cast<double>(out.pairs) : 0.0;
    return out;
}

/// Solves (D^T D) theta = D^T y through an explicit inverse of the Gram matrix.
inline Eigen::VectorXd normal_equations(const Eigen::MatrixXd& design, std::span<const double> y) {
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::MatrixXd gram = design.transpose() * design;
    return gram.inverse() * (design.transpose() * yv);
}

inline macgof::RowMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, bool integer) {
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> small(-2, 2);
    macgof::RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = integer ? small(rng) : normal(rng);
    }
    return m;
}

inline macgof::PairedSample random_sample(std::size_t n, std::size_t p, std::size_t q, std::mt19937_64& rng,
                                          bool integer = false) {
    return macgof::PairedSample(random_matrix(n, p, rng, integer), random_matrix(n, q, rng, integer));
}

inline macgof::LocationSet rows_as_locations(const macgof::PairedSample& s, std::size_t k) {
    macgof::LocationSet out;
    for (std::size_t i = 0; i < k && i < s.size(); ++i) {
        out.push_back({{s.x(i).begin(), s.x(i).end()}, {s.y(i).begin(), s.y(i).end()}});
    }
    return out;
}

inline macgof::RowMatrix column(std::initializer_list<double> values) {
    macgof::RowMatrix m(static_cast<Eigen::Index>(values.size()), 1);
    Eigen::Index i = 0;
    for (double v : values) m(i++, 0) = v;
    return m;
}

}  // namespace oracle
