#include "pcv/jet.hpp"

#include <algorithm>

namespace pcv {

namespace {

std::array<std::array<int, 3>, Jet3::kSize> build_multi_indices() {
    std::array<std::array<int, 3>, Jet3::kSize> m{};
    int n = 0;
    for (int deg = 0; deg <= Jet3::kOrder; ++deg)
        for (int i = deg; i >= 0; --i)
            for (int j = deg - i; j >= 0; --j) m[n++] = {i, j, deg - i - j};
    return m;
}

const auto kMulti = build_multi_indices();

std::array<std::array<int, 4>, 4 * 4 * 4> build_index_lut() {
    std::array<std::array<int, 4>, 64> lut{};
    for (auto& row : lut) row.fill(-1);
    for (int n = 0; n < Jet3::kSize; ++n) {
        auto [i, j, k] = kMulti[n];
        lut[i * 16 + j * 4 + k][0] = n;
    }
    return lut;
}

const auto kIndexLut = build_index_lut();

struct MulTerm {
    std::uint8_t a, b, out;
};

// All ordered coefficient pairs whose degrees sum to <= 3.
std::vector<MulTerm> build_mul_table() {
    std::vector<MulTerm> t;
    for (int a = 0; a < Jet3::kSize; ++a) {
        for (int b = 0; b < Jet3::kSize; ++b) {
            int i = kMulti[a][0] + kMulti[b][0];
            int j = kMulti[a][1] + kMulti[b][1];
            int k = kMulti[a][2] + kMulti[b][2];
            if (i + j + k > Jet3::kOrder) continue;
            t.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                         static_cast<std::uint8_t>(Jet3::index(i, j, k))});
        }
    }
    return t;
}

const std::vector<MulTerm>& mul_table() {
    static const std::vector<MulTerm> t = build_mul_table();
    return t;
}

} // namespace

int Jet3::index(int i, int j, int k) { return kIndexLut[i * 16 + j * 4 + k][0]; }

const std::array<std::array<int, 3>, Jet3::kSize>& Jet3::multi_indices() { return kMulti; }

Jet3 operator*(const Jet3& a, const Jet3& b) {
    Jet3 r;
    r.c_.fill(0.0);
    for (const auto& t : mul_table()) r.c_[t.out] += a.c_[t.a] * b.c_[t.b];
    r.order_ = std::min(a.order_, b.order_);
    return r;
}

// u(f) for a smooth unary u, given u and its first three derivatives at
// value(f).  Writing f = c0 + w with w of zero constant term, w^4 truncates
// away, so u(f) = u0 + u1 w + u2 w^2/2 + u3 w^3/6 exactly through order 3.
Jet3 compose_unary(const Jet3& f, const std::array<double, 4>& u) {
    Jet3 w = f;
    w.c_[0] = 0.0;
    Jet3 w2 = w * w;
    Jet3 r = Jet3::constant(u[0], f.order_) + u[1] * w + (u[2] / 2.0) * w2 + (u[3] / 6.0) * (w2 * w);
    r.order_ = f.order_;
    return r;
}

Jet3 jet_div(const Jet3& a, const Jet3& b, double eps) {
    double v = b.value();
    if (std::abs(v) <= eps) throw DivisionNearZero("division by value within epsilon of zero");
    double inv = 1.0 / v;
    Jet3 r = compose_unary(b, {inv, -inv * inv, 2.0 * inv * inv * inv, -6.0 * inv * inv * inv * inv});
    return a * r;
}

Jet3 jet_sqrt(const Jet3& a) {
    double v = a.value();
    if (!(v > 0.0)) throw DomainError("sqrt of non-positive value");
    double s = std::sqrt(v);
    return compose_unary(a, {s, 0.5 / s, -0.25 / (v * s), 0.375 / (v * v * s)});
}

Jet3 jet_exp(const Jet3& a) {
    double e = std::exp(a.value());
    return compose_unary(a, {e, e, e, e});
}

Jet3 jet_log(const Jet3& a) {
    double v = a.value();
    if (!(v > 0.0)) throw DomainError("log of non-positive value");
    double inv = 1.0 / v;
    return compose_unary(a, {std::log(v), inv, -inv * inv, 2.0 * inv * inv * inv});
}

Jet3 jet_sin(const Jet3& a) {
    double s = std::sin(a.value()), c = std::cos(a.value());
    return compose_unary(a, {s, c, -s, -c});
}

Jet3 jet_cos(const Jet3& a) {
    double s = std::sin(a.value()), c = std::cos(a.value());
    return compose_unary(a, {c, -s, -c, s});
}

Jet3 jet_powi(const Jet3& a, int n) {
    if (n < 0) return jet_div(Jet3::constant(1.0), jet_powi(a, -n));
    Jet3 r = Jet3::constant(1.0);
    Jet3 base = a;
    int e = n;
    while (e > 0) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    if (n == 0) return Jet3::constant(1.0);
    return r;
}

Jet3 jet_partial(const Jet3& a, int axis) {
    if (a.order_ < 1)
        throw BudgetExhausted("derivative budget exhausted: jet trusts no further orders");
    Jet3 r;
    r.c_.fill(0.0);
    for (int n = 0; n < Jet3::kSize; ++n) {
        auto m = kMulti[n];
        if (m[0] + m[1] + m[2] >= Jet3::kOrder) continue;
        m[axis] += 1;
        r.c_[n] = a.c_[Jet3::index(m[0], m[1], m[2])] * m[axis];
    }
    r.order_ = a.order_ - 1;
    return r;
}

} // namespace pcv
