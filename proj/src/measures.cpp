#include "drlab/measures.hpp"

namespace drlab {

namespace detail {

namespace {

inline void axpy(double* __restrict c, const double* __restrict b, double a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) c[j] += a * b[j];
}

} // namespace

void convolve_into(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& c) {
    const std::size_t len = c.size();
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0.0) continue;
        axpy(c.data() + i, b.data(), a[i], std::min(b.size(), len - i));
    }
}

void square_into(const std::vector<double>& a, std::vector<double>& c) {
    const std::size_t len = c.size();
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n && i < len; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        if (2 * i < len) c[2 * i] += ai * ai;
        const std::size_t jmax = std::min(n, len - i);
        if (jmax > i + 1) axpy(c.data() + 2 * i + 1, a.data() + i + 1, 2.0 * ai, jmax - i - 1);
    }
}

} // namespace detail

CollapseResult collapse_tail(Pmf<double>& p, double eps) {
    CollapseResult r;
    auto& w = p.tilted_mut();
    r.cut = w.size();
    if (w.size() <= 1 || eps <= 0.0) return r;
    double tail = 0.0;
    std::size_t cut = w.size();
    while (cut > 1 && tail + w[cut - 1] <= eps) {
        tail += w[cut - 1];
        --cut;
    }
    if (cut == w.size()) return r;
    const double inv = p.inv_base();
    for (std::size_t x = cut; x < w.size(); ++x) {
        r.removed_weighted += w[x];
        r.removed_weighted_x += static_cast<double>(x) * w[x];
        r.removed_mass += w[x] * std::pow(inv, static_cast<double>(x));
    }
    w.resize(cut);
    w[0] += r.removed_mass;
    r.cut = cut;
    return r;
}

} // namespace drlab
