#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyuniv/zmatrix.hpp"

namespace polyuniv::lattice {

// (Z^n, Q_a) with Q_a(x) = sum a_i x_i^2.
struct DiagonalSpace {
    std::vector<i64> a;

    std::size_t n() const { return a.size(); }
    Z Q(const ZVector& x) const;
    Z B(const ZVector& x, const ZVector& y) const;
    ZVector alpha() const { return ZVector(a.size(), 1); }
    ZVector form_of(const ZVector& y) const;  // coefficients of x -> B_a(y, x)
};

struct GramLattice {
    ZMatrix gram;
    ZMatrix basis;  // rows in ambient coordinates
    std::vector<i64> ambient;
    int forms_rank = 0;
    bool dependent_forms = false;

    int rank() const { return static_cast<int>(basis.size()); }
};

struct BetaVector {
    std::vector<i64> beta;
    i64 pairing = 0;

    // recomputes B_a(alpha, beta) and rejects a mismatch with the declared value
    static BetaVector make(const std::vector<i64>& a, std::vector<i64> beta, i64 declared);
};

ZMatrix hnf(ZMatrix rows);               // row Hermite normal form, zero rows dropped
ZMatrix integer_kernel(const ZMatrix& forms);  // HNF basis of {x in Z^n : forms x = 0}

GramLattice kernel_lattice(const DiagonalSpace& space, const ZMatrix& forms);
GramLattice hyperplane_lattice(const std::vector<i64>& a);  // L_a
GramLattice complement(const std::vector<i64>& a, const std::vector<i64>& beta);  // L_{a,beta}

Z discriminant(const GramLattice& L);
Z pair_discriminant(const std::vector<i64>& a, const std::vector<i64>& beta);

// Exact rational coordinates of x in the row space of basis; nullopt if x is outside it.
std::optional<std::vector<Q>> coordinates(const ZMatrix& basis, const ZVector& x);
bool in_span_Z(const ZMatrix& basis, const ZVector& x);

// Samples ambient integer solutions of the defining forms in |x_i| <= box and checks that each
// lies in the integer row span of L.basis. Returns the number of solutions checked, -1 on failure.
long span_completeness(const GramLattice& L, const ZMatrix& forms, int box, int samples, std::mt19937_64& rng);

// Z_p-kernel generators of forms (rows), via elimination over the localization Z_(p).
std::vector<std::vector<Q>> zp_kernel(const ZMatrix& forms, long p);

// Every vector of Z_p^n orthogonal to K is a Z_p-combination of the integral complement basis.
// K: generators as rows (possibly none). Checks the Z_p-kernel generators and all combinations
// with coefficients in [-box, box] of up to two of them.
bool localization_check_lemma_p(const std::vector<i64>& a, const ZMatrix& K, long p, int box);

// ---- Lemma nd -------------------------------------------------------------------

class PreconditionError : public std::invalid_argument {
public:
    enum Kind { Pairing, NotUnimodular, FewUnits };
    PreconditionError(Kind k, const std::string& m) : std::invalid_argument(m), kind(k) {}
    Kind kind;
};

struct NdDiagonal {
    long p = 0;
    std::vector<Q> entries;         // 8 entries; the first is a1 a2 a3 / (Q(alpha) Q(beta) - 1)
    Z first_unit_rep;               // representative of the first entry's class in {1..p-1}
    std::vector<std::size_t> order; // indices of a2 in the order used (three units first)
};

NdDiagonal lemma_nd_diagonal(const std::vector<i64>& a2, const std::vector<i64>& beta, long p);

struct NdCheck {
    bool rank_ok = false;
    bool det_ok = false;
    bool hasse_ok = false;
    bool ok() const { return rank_ok && det_ok && hasse_ok; }
};

NdCheck verify_lemma_nd(const std::vector<i64>& a2, const std::vector<i64>& beta, long p);

// ---- dyadic sublattices ---------------------------------------------------------

enum class Odd3Class { H, A, Other };
const char* to_string(Odd3Class c);

struct Odd3Result {
    GramLattice lattice;  // rank 2
    Odd3Class cls = Odd3Class::Other;
    bool even_universal = false;
};

// Indices are 0-based. The vectors are checked against beta when given.
Odd3Result sublattice_odd3(const std::vector<i64>& a, std::size_t j1, std::size_t j2, std::size_t j3,
                           std::optional<std::size_t> j4 = std::nullopt,
                           const std::vector<i64>* beta = nullptr);

struct DiagonalSublattice {
    std::vector<Z> b;
    ZMatrix vectors;  // rows
};

DiagonalSublattice sublattice_odd2(const std::vector<i64>& a, const std::vector<std::size_t>& js);
// requires a[0] = 1, a[1] = 2; js from positions 2..9
DiagonalSublattice sublattice_12(const std::vector<i64>& a, const std::vector<std::size_t>& js);

// (ord_2 a_j2, ..., ord_2 a_j5) sorted ascending, then membership in the delta2 list
bool pattern_2equ(std::vector<int> orders);
const std::vector<std::vector<int>>& delta2_patterns();

std::string lattice_report(const GramLattice& L);

}  // namespace polyuniv::lattice
