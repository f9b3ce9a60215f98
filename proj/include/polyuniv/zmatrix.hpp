#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "polyuniv/checked.hpp"

namespace polyuniv {

using Z = mpz_class;
using Q = mpq_class;
using ZVector = std::vector<Z>;
using ZMatrix = std::vector<ZVector>;
using QMatrix = std::vector<std::vector<Q>>;

ZMatrix zmatrix(const std::vector<std::vector<i64>>& m);
ZVector zvector(const std::vector<i64>& v);
std::vector<std::vector<i64>> to_i64(const ZMatrix& m);
i64 to_i64(const Z& z);
i128 to_i128(const Z& z);
Z from_i128(i128 v);

ZMatrix transpose(const ZMatrix& a);
ZMatrix multiply(const ZMatrix& a, const ZMatrix& b);
Z det(const ZMatrix& a);  // fraction-free elimination
int rank(const ZMatrix& a);
bool is_symmetric(const ZMatrix& a);

// B * diag(d) * B^T
ZMatrix gram_of(const ZMatrix& basis, const ZVector& diag);

// p-adic valuation; INT32_MAX for zero
int vp(const Z& z, long p);
int vp(const Q& q, long p);

std::string to_string(const ZMatrix& m);

}  // namespace polyuniv
