#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polyuniv/zmatrix.hpp"

namespace polyuniv::padic {

// Unit class u: odd p -> +1 square / -1 nonsquare; p = 2 -> residue mod 8 in {1,3,5,7}.
struct LocalClass {
    long p = 0;
    int v = 0;
    int u = 0;

    auto operator<=>(const LocalClass&) const = default;
};

std::string to_string(const LocalClass& c);

bool is_prime(long p);
int legendre(const Z& a, long p);  // a not divisible by p
LocalClass local_class(const Z& n, long p);
LocalClass local_class(const Q& q, long p);
std::vector<int> unit_classes(long p);  // {1,-1} or {1,3,5,7}

int hilbert_symbol(const Q& a, const Q& b, long p);
int hasse_invariant(const std::vector<Q>& diag, long p);

// Rational diagonalization of a nondegenerate symmetric matrix (Gram-Schmidt).
std::vector<Q> rational_diagonal(const ZMatrix& gram);

// ---- Jordan-type splitting over Z_p ----------------------------------------------

struct Block {
    std::vector<std::vector<Q>> g;  // 1x1, or 2x2 (p = 2 only)
    int scale = 0;                  // v_p of the 1x1 entry, or of the off-diagonal entry
    bool hyperbolic = false;        // 2x2 only: H-type (isotropic) versus A-type
};

struct Splitting {
    long p = 0;
    std::vector<Block> blocks;
    QMatrix basis;  // row j: new basis vector j in original coordinates; blocks use consecutive rows
};

Splitting split(const ZMatrix& gram, long p);

// ---- representation -----------------------------------------------------------------

enum class Verdict { Represented, NotRepresented, Inconclusive };
const char* to_string(Verdict v);

struct LocalRepCertificate {
    long p = 0;
    Z n;
    int k = 0;   // x is a solution of Q(x) = n mod p^k
    ZVector x;   // in the input coordinates
    int e = -1;  // min_i v_p(dQ/dx_i (x))
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

// Gram convention: Q(x) = x^T G x.
LocalRepCertificate local_represents(const ZMatrix& gram, const Z& n, long p, int max_precision = 256);
LocalRepCertificate local_represents_diag(const ZVector& diag, const Z& n, long p, int max_precision = 256);

// Independent modular re-check of a certificate.
bool verify_certificate(const ZMatrix& gram, const LocalRepCertificate& c);

struct ClassReport {
    long p = 0;
    int v_cap = 0;
    std::set<LocalClass> classes;  // represented classes with v <= v_cap
    int v_stab = 0;
    bool periodic = false;  // classes at v and v+2 agree for v_stab <= v <= v_stab+3
    std::vector<LocalRepCertificate> certificates;  // one per represented class when requested
};

ClassReport represented_classes(const ZMatrix& gram, long p, int v_cap, bool with_certificates = false,
                                int max_precision = 256);

struct UniversalityReport {
    bool verdict = false;
    bool inconclusive = false;
    std::vector<LocalClass> missing;
    std::vector<LocalRepCertificate> certificates;  // the base classes, v in {0,1} (odd p) or {1,2} (p = 2)
};

// Every class of 2Z_2. Base classes need certificates within 2^precision.
UniversalityReport even_universal_2(const ZMatrix& gram, int precision = 64);
bool is_even_universal_2(const ZMatrix& gram, int precision = 64);

UniversalityReport universal_p(const ZMatrix& gram, long p, int precision = 64);
bool is_universal_p(const ZMatrix& gram, long p, int precision = 64);

ZMatrix diagonal_gram(const ZVector& d);

}  // namespace polyuniv::padic
