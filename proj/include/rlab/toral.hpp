#ifndef RLAB_TORAL_HPP
#define RLAB_TORAL_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "rlab/errors.hpp"

namespace rlab {

// Exact integer linear algebra for unimodular matrices. Everything that
// decides ergodicity is integer arithmetic; floating point enters only for
// eigenvalue moduli, and unit-root eigenvalues are settled exactly first.

struct IntMatrix {
    int k = 0;
    std::vector<long long> a; // row-major, k*k

    IntMatrix() = default;
    IntMatrix(int dim, std::vector<long long> entries) : k(dim), a(std::move(entries)) {
        if (k < 1 || a.size() != static_cast<std::size_t>(k) * k)
            throw usage_error("IntMatrix: entry count does not match dimension");
    }
    static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);
    static IntMatrix identity(int k);
    static IntMatrix companion(const std::vector<long long>& monic_poly);

    long long at(int i, int j) const { return a[static_cast<std::size_t>(i) * k + j]; }
    long long& at(int i, int j) { return a[static_cast<std::size_t>(i) * k + j]; }
};

IntMatrix matmul(const IntMatrix& x, const IntMatrix& y);
long long determinant(const IntMatrix& m);
IntMatrix adjugate(const IntMatrix& m); // A * adj(A) = det(A) * I

// Monic characteristic polynomial det(lambda*I - A), coefficients ascending:
// p[0] + p[1]*x + ... + p[k]*x^k with p[k] = 1. Faddeev-LeVerrier, exact.
std::vector<long long> characteristic_polynomial(const IntMatrix& m);

// Cyclotomic polynomial Phi_d, ascending coefficients.
std::vector<long long> cyclotomic_polynomial(int d);

// Exact division over Z[x]: quotient written if divisible.
bool poly_divide_exact(const std::vector<long long>& num, const std::vector<long long>& den,
                       std::vector<long long>* quotient);

// All complex roots of a monic integer polynomial (Durand-Kerner).
std::vector<std::complex<double>> polynomial_roots(const std::vector<long long>& monic);

struct CyclotomicFactor {
    int d = 0;            // root-of-unity order
    int multiplicity = 0; // how many times Phi_d divides
};

struct ErgodicityReport {
    long long det = 0;
    bool det_ok = false; // |det| == 1
    std::vector<long long> char_poly;
    // factorization used for the unit-root test: every Phi_d with phi(d) <= k,
    // divided out with multiplicity; what is left has no root of unity
    std::vector<CyclotomicFactor> cyclotomic_factors;
    std::vector<long long> residual_poly;
    std::vector<double> eigenvalue_moduli; // cyclotomic roots contribute exactly 1
    bool has_unit_root_eigenvalue = false;
    bool is_ergodic = false;    // |det|=1 and no cyclotomic factor
    bool is_hyperbolic = false; // no modulus within 1e-9 of 1
};

constexpr double kUnitModulusTol = 1e-9;

ErgodicityReport validate_toral_matrix(const IntMatrix& m);

} // namespace rlab

#endif
