#include "atomonly/sector.hpp"
#include "atomonly/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>

namespace atomonly {

const char* to_string(TheoryOrder o) {
    return o == TheoryOrder::Second ? "SecondOrder" : "FourthOrder";
}

TheoryOrder parse_order(const std::string& s) {
    if (s == "SecondOrder" || s == "2RE" || s == "second" || s == "2") return TheoryOrder::Second;
    if (s == "FourthOrder" || s == "4KRE" || s == "fourth" || s == "4") return TheoryOrder::Fourth;
    throw ConfigError("unknown theory order '" + s + "'");
}

namespace {

struct BandRow {
    cplx a, b, c, d, e;
};

struct BandContext {
    double S;
    int k;
    double g2, g4;
    bool fourth;
    double w0;
    QCoefficients q;
};

BandRow band_row(const BandContext& x, double M) {
    const double S = x.S;
    const double kk = static_cast<double>(x.k);
    auto F = [S](double m) { return f_element(S, m); };
    const double fm = F(M), fmk = F(M + kk);
    const double fm1 = F(M - 1), fmk1 = F(M + kk - 1);
    const double fm2 = F(M - 2), fmk2 = F(M + kk - 2);
    const double fp1 = F(M + 1), fmkp1 = F(M + kk + 1);

    const cplx I{0.0, 1.0};
    const cplx qm = x.q.q_minus, qp = x.q.q_plus, qs = x.q.q_sigma, qd = x.q.q_delta;
    const cplx cm = std::conj(qm), cp = std::conj(qp), cd = std::conj(qd);
    const double kap = x.q.kappa;

    BandRow r;
    r.a = I * x.w0 * kk
          - 2.0 * x.g2 * (qm * fm1 * fm1 + cm * fmk1 * fmk1 + qp * fm * fm + cp * fmk * fmk);
    r.b = 2.0 * x.g2 * (qm + cm) * fm * fmk;
    r.d = 2.0 * x.g2 * (qp + cp) * fm1 * fmk1;
    r.c = 0.0;
    r.e = 0.0;
    if (!x.fourth) return r;

    const double fm1s = fm1 * fm1, fmk1s = fmk1 * fmk1, fms = fm * fm, fmks = fmk * fmk;
    const double fm2s = fm2 * fm2, fmk2s = fmk2 * fmk2, fp1s = fp1 * fp1, fmkp1s = fmkp1 * fmkp1;
    const cplx qm3 = qm * qm * qm, cm3 = cm * cm * cm, qp3 = qp * qp * qp, cp3 = cp * cp * cp;
    const cplx mps = qm * qp * qs, cmps = std::conj(mps);
    const cplx mms = qm * qm * qs, cmms = std::conj(mms);
    const cplx pps = qp * qp * qs, cpps = std::conj(pps);
    const double am = std::norm(qm) / kap, ap = std::norm(qp) / kap;
    const cplx xd = qm * cp * qd, cxd = std::conj(xd);
    const cplx qm2 = qm * qm, cm2 = cm * cm, qp2 = qp * qp, cp2 = cp * cp;

    const cplx A4 =
        2.0 * qm3 * fm1s * fm2s + 2.0 * cm3 * fmk1s * fmk2s + 2.0 * qp3 * fms * fp1s + 2.0 * cp3 * fmks * fmkp1s
        + mps * (fm1s * fmk1s + fms * fmks + 2.0 * fms * fm1s)
        + cmps * (fm1s * fmk1s + fms * fmks + 2.0 * fmks * fmk1s)
        + mms * (fm1s * fm1s + fm1s * fmks) + cmms * (fmk1s * fmk1s + fms * fmk1s)
        + pps * (fms * fms + fms * fmk1s) + cpps * (fmks * fmks + fmks * fm1s)
        + 2.0 * am * fm1s * fmk1s + 2.0 * ap * fms * fmks
        + 4.0 * xd * fmks * fm1s + 4.0 * cxd * fms * fmk1s
        + (qm2 + cm2) / kap * fm1s * fmk1s + (qp2 + cp2) / kap * fms * fmks
        + 2.0 * qm2 * qd * fmks * fm1s + 2.0 * cm2 * cd * fms * fmk1s
        + 2.0 * qp2 * cd * fms * fmk1s + 2.0 * cp2 * qd * fmks * fm1s;

    const double pb = fm * fmk;
    const cplx B4 =
        4.0 * qm3 * pb * fm1s + 4.0 * cm3 * pb * fmk1s
        + mps * (fms * pb + pb * fp1s) + cmps * (pb * fmks + pb * fmkp1s)
        + mms * fms * pb + cmms * pb * fmks + pps * pb * fp1s + cpps * pb * fmkp1s
        + am * (pb * fm1s + pb * fmk1s + fms * pb + pb * fmks)
        + 2.0 * xd * pb * fmkp1s + 2.0 * cxd * pb * fp1s
        + qm2 / kap * (pb * fmks + pb * fm1s) + cm2 / kap * (fms * pb + pb * fmk1s)
        + qm2 * qd * pb * fmkp1s + cm2 * cd * pb * fp1s
        + qp2 * cd * pb * fp1s + cp2 * qd * pb * fmkp1s;

    const double pd = fm1 * fmk1;
    const cplx D4 =
        4.0 * qp3 * fms * pd + 4.0 * cp3 * fmks * pd
        + mps * (fm1s * pd + fm2s * pd) + cmps * (pd * fmk1s + pd * fmk2s)
        + mms * pd * fm2s + cmms * pd * fmk2s
        + pps * fm1s * pd + cpps * pd * fmk1s
        + ap * (fms * pd + fmks * pd + fm1s * pd + pd * fmk1s)
        + 2.0 * xd * pd * fm2s + 2.0 * cxd * pd * fmk2s
        + qp2 / kap * (pd * fmk1s + fms * pd) + cp2 / kap * (fm1s * pd + fmks * pd)
        + qm2 * qd * pd * fm2s + cm2 * cd * pd * fmk2s
        + qp2 * cd * pd * fmk2s + cp2 * qd * pd * fm2s;

    const cplx sm = qm + cm, sp = qp + cp;
    r.a += 4.0 * x.g4 * A4;
    r.b -= 4.0 * x.g4 * B4;
    r.d -= 4.0 * x.g4 * D4;
    r.c = 4.0 * x.g4 * (2.0 * qm3 + 2.0 * cm3 + sm * sm / kap) * fm * fp1 * fmk * fmkp1;
    r.e = 4.0 * x.g4 * (2.0 * qp3 + 2.0 * cp3 + sp * sp / kap) * fm1 * fm2 * fmk1 * fmk2;
    return r;
}

SectorMatrix allocate(const ModelParams& p, const QCoefficients& q, int k, TheoryOrder order,
                      BandContext& ctx) {
    p.validate();
    const int two_s = p.two_s();
    if (std::abs(k) > two_s)
        throw SectorRangeError("sector k=" + std::to_string(k) + " outside |k| <= 2S=" + std::to_string(two_s));
    const double S = p.spin();
    SectorMatrix s;
    s.k = k;
    s.spin = S;
    s.m_first = std::max(-S, -S - k);
    const Eigen::Index n = two_s + 1 - std::abs(k);
    s.a.resize(n); s.b.resize(n); s.c.resize(n); s.d.resize(n); s.e.resize(n);
    const double g = p.g();
    ctx = BandContext{S, k, g * g, g * g * g * g, order == TheoryOrder::Fourth, p.omega0, q};
    return s;
}

inline void store(SectorMatrix& s, Eigen::Index i, const BandRow& r) {
    const Eigen::Index n = s.dim();
    s.a[i] = r.a;
    s.b[i] = i + 1 < n ? r.b : cplx{};
    s.c[i] = i + 2 < n ? r.c : cplx{};
    s.d[i] = i >= 1 ? r.d : cplx{};
    s.e[i] = i >= 2 ? r.e : cplx{};
}

} // namespace

SectorMatrix build_sector(const ModelParams& p, const QCoefficients& q, int k, TheoryOrder order) {
    BandContext ctx{};
    SectorMatrix s = allocate(p, q, k, order, ctx);
    const Eigen::Index n = s.dim();
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) store(s, i, band_row(ctx, s.m_at(i)));
    return s;
}

SectorMatrix build_sector_serial(const ModelParams& p, const QCoefficients& q, int k, TheoryOrder order) {
    BandContext ctx{};
    SectorMatrix s = allocate(p, q, k, order, ctx);
    for (Eigen::Index i = 0; i < s.dim(); ++i) store(s, i, band_row(ctx, s.m_at(i)));
    return s;
}

namespace {
template <bool Parallel>
void apply_impl(const SectorMatrix& s, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    const Eigen::Index n = s.dim();
    y.resize(n);
#pragma omp parallel for schedule(static) if (Parallel)
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx acc = s.a[i] * x[i];
        if (i + 1 < n) acc += s.b[i] * x[i + 1];
        if (i + 2 < n) acc += s.c[i] * x[i + 2];
        if (i >= 1) acc += s.d[i] * x[i - 1];
        if (i >= 2) acc += s.e[i] * x[i - 2];
        y[i] = acc;
    }
}
} // namespace

Eigen::VectorXcd SectorMatrix::apply(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y;
    apply_impl<true>(*this, x, y);
    return y;
}

Eigen::VectorXcd SectorMatrix::apply_serial(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y;
    apply_impl<false>(*this, x, y);
    return y;
}

Eigen::MatrixXcd SectorMatrix::to_dense() const {
    const Eigen::Index n = dim();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = a[i];
        if (i + 1 < n) m(i, i + 1) = b[i];
        if (i + 2 < n) m(i, i + 2) = c[i];
        if (i >= 1) m(i, i - 1) = d[i];
        if (i >= 2) m(i, i - 2) = e[i];
    }
    return m;
}

double SectorMatrix::max_abs() const {
    double m = 0.0;
    for (const auto* v : {&a, &b, &c, &d, &e})
        if (v->size()) m = std::max(m, v->cwiseAbs().maxCoeff());
    return m;
}

double SectorMatrix::norm1() const {
    const Eigen::Index n = dim();
    double best = 0.0;
    // column j collects a[j], b[j-1], c[j-2], d[j+1], e[j+2]
    for (Eigen::Index j = 0; j < n; ++j) {
        double s = std::abs(a[j]);
        if (j >= 1) s += std::abs(b[j - 1]);
        if (j >= 2) s += std::abs(c[j - 2]);
        if (j + 1 < n) s += std::abs(d[j + 1]);
        if (j + 2 < n) s += std::abs(e[j + 2]);
        best = std::max(best, s);
    }
    return best;
}

Eigen::VectorXd SectorMatrix::column_sums_abs() const {
    const Eigen::Index n = dim();
    Eigen::VectorXd out(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        cplx s = a[j];
        if (j >= 1) s += b[j - 1];
        if (j >= 2) s += c[j - 2];
        if (j + 1 < n) s += d[j + 1];
        if (j + 2 < n) s += e[j + 2];
        out[j] = std::abs(s);
    }
    return out;
}

namespace {
template <class T>
void put(std::ostream& os, T v) {
    // host is little-endian x86-64; static_assert keeps that assumption visible
    static_assert(sizeof(double) == 8);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw NumericalError("truncated sector dump");
    return v;
}
} // namespace

void write_sector_binary(const SectorMatrix& s, std::ostream& os) {
    put<std::int32_t>(os, s.k);
    put<std::int64_t>(os, s.dim());
    for (const auto* v : {&s.a, &s.b, &s.c, &s.d, &s.e})
        for (Eigen::Index i = 0; i < v->size(); ++i) {
            put<double>(os, (*v)[i].real());
            put<double>(os, (*v)[i].imag());
        }
}

SectorMatrix read_sector_binary(std::istream& is, double spin) {
    SectorMatrix s;
    s.k = get<std::int32_t>(is);
    const auto n = get<std::int64_t>(is);
    s.spin = spin;
    s.m_first = std::max(-spin, -spin - s.k);
    for (auto* v : {&s.a, &s.b, &s.c, &s.d, &s.e}) {
        v->resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = get<double>(is);
            const double im = get<double>(is);
            (*v)[i] = cplx(re, im);
        }
    }
    return s;
}

} // namespace atomonly
