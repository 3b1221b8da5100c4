#include "rlab/toral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace rlab {

namespace {

using i128 = __int128;

long long checked_narrow(i128 v, const char* where) {
    if (v > i128(9223372036854775807LL) || v < -i128(9223372036854775807LL) - 1)
        throw capacity_error(std::string("integer overflow in ") + where);
    return static_cast<long long>(v);
}

int euler_phi(int n) {
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

void strip_leading_zeros(std::vector<long long>& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

} // namespace

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
    const int k = static_cast<int>(rows.size());
    std::vector<long long> flat;
    flat.reserve(static_cast<std::size_t>(k) * k);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != k) throw usage_error("matrix must be square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return IntMatrix(k, std::move(flat));
}

IntMatrix IntMatrix::identity(int k) {
    IntMatrix m(k, std::vector<long long>(static_cast<std::size_t>(k) * k, 0));
    for (int i = 0; i < k; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::companion(const std::vector<long long>& monic) {
    const int k = static_cast<int>(monic.size()) - 1;
    if (k < 1 || monic[k] != 1) throw usage_error("companion: need a monic polynomial of degree >= 1");
    IntMatrix m(k, std::vector<long long>(static_cast<std::size_t>(k) * k, 0));
    for (int i = 1; i < k; ++i) m.at(i, i - 1) = 1;
    for (int i = 0; i < k; ++i) m.at(i, k - 1) = -monic[i];
    return m;
}

IntMatrix matmul(const IntMatrix& x, const IntMatrix& y) {
    if (x.k != y.k) throw usage_error("matmul: dimension mismatch");
    const int k = x.k;
    IntMatrix r(k, std::vector<long long>(static_cast<std::size_t>(k) * k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            i128 s = 0;
            for (int t = 0; t < k; ++t) s += i128(x.at(i, t)) * y.at(t, j);
            r.at(i, j) = checked_narrow(s, "matmul");
        }
    return r;
}

std::vector<long long> characteristic_polynomial(const IntMatrix& m) {
    const int k = m.k;
    // B_1 = A, c_1 = -tr(B_1); B_j = A (B_{j-1} + c_{j-1} I), c_j = -tr(B_j)/j
    std::vector<long long> coeffs(static_cast<std::size_t>(k) + 1, 0);
    coeffs[k] = 1;
    IntMatrix b = m;
    long long c = 0;
    for (int j = 1; j <= k; ++j) {
        if (j > 1) {
            IntMatrix shifted = b;
            for (int i = 0; i < k; ++i)
                shifted.at(i, i) = checked_narrow(i128(shifted.at(i, i)) + c, "charpoly");
            b = matmul(m, shifted);
        }
        i128 tr = 0;
        for (int i = 0; i < k; ++i) tr += b.at(i, i);
        if (tr % j != 0) throw capacity_error("charpoly: non-exact trace division");
        c = checked_narrow(-tr / j, "charpoly");
        coeffs[k - j] = c;
    }
    return coeffs;
}

long long determinant(const IntMatrix& m) {
    // det(A) = (-1)^k * p(0) for p = det(xI - A)
    const auto p = characteristic_polynomial(m);
    return (m.k % 2 == 0) ? p[0] : -p[0];
}

IntMatrix adjugate(const IntMatrix& m) {
    const int k = m.k;
    if (k == 1) return IntMatrix(1, {1});
    IntMatrix adj(k, std::vector<long long>(static_cast<std::size_t>(k) * k, 0));
    std::vector<long long> minor_entries(static_cast<std::size_t>(k - 1) * (k - 1));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            int idx = 0;
            for (int r = 0; r < k; ++r) {
                if (r == i) continue;
                for (int c = 0; c < k; ++c) {
                    if (c == j) continue;
                    minor_entries[idx++] = m.at(r, c);
                }
            }
            IntMatrix minor(k - 1, minor_entries);
            long long cof = determinant(minor);
            if ((i + j) % 2 != 0) cof = -cof;
            adj.at(j, i) = cof; // transpose of cofactor matrix
        }
    return adj;
}

std::vector<long long> cyclotomic_polynomial(int d) {
    // Phi_d = (x^d - 1) / prod_{e | d, e < d} Phi_e
    std::vector<long long> num(static_cast<std::size_t>(d) + 1, 0);
    num[0] = -1;
    num[d] = 1;
    for (int e = 1; e < d; ++e) {
        if (d % e != 0) continue;
        std::vector<long long> q;
        if (!poly_divide_exact(num, cyclotomic_polynomial(e), &q))
            throw capacity_error("cyclotomic: inexact division");
        num = std::move(q);
    }
    return num;
}

bool poly_divide_exact(const std::vector<long long>& num, const std::vector<long long>& den,
                       std::vector<long long>* quotient) {
    std::vector<long long> rem = num;
    strip_leading_zeros(rem);
    std::vector<long long> d = den;
    strip_leading_zeros(d);
    if (d.size() == 1 && d[0] == 0) throw usage_error("poly_divide_exact: division by zero");
    if (rem.size() < d.size()) return false;
    const long long lead = d.back();
    std::vector<long long> q(rem.size() - d.size() + 1, 0);
    for (std::size_t i = q.size(); i-- > 0;) {
        const long long top = rem[i + d.size() - 1];
        if (top % lead != 0) return false;
        const long long f = top / lead;
        q[i] = f;
        for (std::size_t j = 0; j < d.size(); ++j) {
            i128 v = i128(rem[i + j]) - i128(f) * d[j];
            rem[i + j] = checked_narrow(v, "poly_divide");
        }
    }
    for (long long v : rem)
        if (v != 0) return false;
    if (quotient) *quotient = std::move(q);
    return true;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<long long>& monic) {
    std::vector<long long> p = monic;
    strip_leading_zeros(p);
    const int n = static_cast<int>(p.size()) - 1;
    if (n < 1) return {};
    if (p[n] != 1) throw usage_error("polynomial_roots: polynomial must be monic");

    std::vector<std::complex<double>> c(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) c[i] = static_cast<double>(p[i]);

    auto eval = [&](std::complex<double> x) {
        std::complex<double> v = c[n];
        for (int i = n - 1; i >= 0; --i) v = v * x + c[i];
        return v;
    };

    // Cauchy bound on root moduli
    double bound = 0.0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(static_cast<double>(p[i])));
    bound += 1.0;

    std::vector<std::complex<double>> z(n);
    const std::complex<double> seed(0.4, 0.9); // standard non-symmetric start
    std::complex<double> w(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        w *= seed;
        z[i] = bound * w / std::abs(w) * (0.5 + 0.5 * (i + 1.0) / n);
    }

    for (int iter = 0; iter < 1000; ++iter) {
        double shift = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            if (std::abs(denom) == 0.0) denom = 1e-30;
            const std::complex<double> delta = eval(z[i]) / denom;
            z[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-14 * bound) break;
    }
    return z;
}

ErgodicityReport validate_toral_matrix(const IntMatrix& m) {
    ErgodicityReport rep;
    rep.char_poly = characteristic_polynomial(m);
    rep.det = (m.k % 2 == 0) ? rep.char_poly[0] : -rep.char_poly[0];
    rep.det_ok = (rep.det == 1 || rep.det == -1);

    // Divide out every cyclotomic factor Phi_d, phi(d) <= k. Any eigenvalue
    // that is a root of unity has minimal polynomial Phi_d of degree <= k.
    rep.residual_poly = rep.char_poly;
    const int k = m.k;
    for (int d = 1; d <= 2 * k * k + 1; ++d) {
        if (euler_phi(d) > k) continue;
        int mult = 0;
        std::vector<long long> q;
        while (poly_divide_exact(rep.residual_poly, cyclotomic_polynomial(d), &q)) {
            rep.residual_poly = q;
            ++mult;
        }
        if (mult > 0) {
            rep.cyclotomic_factors.push_back({d, mult});
            for (int i = 0; i < mult * euler_phi(d); ++i) rep.eigenvalue_moduli.push_back(1.0);
        }
    }
    rep.has_unit_root_eigenvalue = !rep.cyclotomic_factors.empty();

    bool residual_near_unit = false;
    if (rep.residual_poly.size() > 1) {
        for (const auto& root : polynomial_roots(rep.residual_poly)) {
            const double mod = std::abs(root);
            rep.eigenvalue_moduli.push_back(mod);
            if (std::abs(mod - 1.0) < kUnitModulusTol) residual_near_unit = true;
        }
    }
    std::sort(rep.eigenvalue_moduli.begin(), rep.eigenvalue_moduli.end());

    rep.is_ergodic = rep.det_ok && !rep.has_unit_root_eigenvalue;
    rep.is_hyperbolic = !rep.has_unit_root_eigenvalue && !residual_near_unit;
    return rep;
}

} // namespace rlab
