#ifndef SUMAPPROX_ORACLE_HPP
#define SUMAPPROX_ORACLE_HPP

#include <string>
#include <vector>

#include "sumapprox/domain.hpp"
#include "sumapprox/levelling.hpp"

namespace sumapprox {

/// Exact error of approximation of h by a sum of factor-algebra elements,
/// with optimal components and an annihilating dual certificate.
struct OracleResult {
    enum class Status { optimal, numerical_trouble };
    Status status = Status::optimal;
    double error = 0.0;
    std::vector<FactorFunction> components;  // one per factor
    std::vector<double> dual_weights;        // one per point, l1 norm <= 1
};

/// E(h) = min over factor components of ||h - sum of lifts||, solved as a
/// linear program (dense two-phase simplex, Bland's rule). Components are
/// gauge-fixed with c_i(0) = 0 for every factor i >= 1, since all the
/// algebras share the constants. Works for any n >= 2 factors.
OracleResult lp_exact_error(const Domain& d, const Field& h);

/// Alias for the n-factor case; identical formulation.
OracleResult n_factor_error(const Domain& d, const Field& h);

struct CertificateCheck {
    bool pass = true;
    std::string reason;
};

/// Re-checks the OracleResult invariants without trusting solver internals:
/// primal norm matches error, dual weights annihilate every class indicator,
/// dual l1 norm <= 1, and |sum w.h| equals the error (all within 1e-9).
CertificateCheck verify_certificate(const Domain& d, const Field& h,
                                    const OracleResult& r);

}  // namespace sumapprox

#endif
