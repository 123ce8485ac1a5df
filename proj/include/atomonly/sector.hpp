// sector.hpp - U(1) sector blocks L^(k) of the atom-only master equation
//
// Sector k holds rho_{M, M+k}. Row/column i corresponds to M = m_first + i.
// Band arrays are indexed by row:
//   a[i] = L(i,i), b[i] = L(i,i+1), c[i] = L(i,i+2), d[i] = L(i,i-1), e[i] = L(i,i-2).
// Entries that would reach outside the sector are zero.

#pragma once

#include "atomonly/model.hpp"

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace atomonly {

enum class TheoryOrder { Second, Fourth };

const char* to_string(TheoryOrder o);
TheoryOrder parse_order(const std::string& s);  // "SecondOrder"/"2RE"/"FourthOrder"/"4KRE"

struct SectorMatrix {
    int k{0};
    double spin{0.0};
    double m_first{0.0};
    Eigen::VectorXcd a, b, c, d, e;

    Eigen::Index dim() const { return a.size(); }
    double m_at(Eigen::Index i) const { return m_first + static_cast<double>(i); }

    // y = L x; OpenMP over rows
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    Eigen::VectorXcd apply_serial(const Eigen::VectorXcd& x) const;

    Eigen::MatrixXcd to_dense() const;
    double max_abs() const;
    double norm1() const;  // max absolute column sum
    // |sum of column j| for every column, relevant for k = 0 only
    Eigen::VectorXd column_sums_abs() const;
};

// throws SectorRangeError when |k| > 2S
SectorMatrix build_sector(const ModelParams& p, const QCoefficients& q, int k, TheoryOrder order);
SectorMatrix build_sector_serial(const ModelParams& p, const QCoefficients& q, int k, TheoryOrder order);

// little-endian dump: int32 k, int64 dim, then a, b, c, d, e as (re, im) doubles
void write_sector_binary(const SectorMatrix& s, std::ostream& os);
SectorMatrix read_sector_binary(std::istream& is, double spin);

} // namespace atomonly
