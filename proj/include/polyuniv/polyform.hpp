#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "polyuniv/bitmap.hpp"
#include "polyuniv/checked.hpp"

namespace polyuniv::polyform {

// Weighted sum of generalized m-gonal numbers, coefficients kept nondecreasing.
struct MGonalForm {
    i64 m = 3;
    std::vector<i64> a;

    static MGonalForm make(i64 m, std::vector<i64> a);
    std::size_t rank() const { return a.size(); }
    bool operator==(const MGonalForm&) const = default;
};

struct RepresentationWitness {
    std::vector<i64> x;
    i128 value = 0;
};

struct TruantRecord {
    MGonalForm form;
    std::optional<i64> truant;  // empty: every k in 1..bound represented
    i64 bound = 0;
};

// ((m-2)x^2 - (m-4)x)/2, exact; throws OverflowError.
i128 polygonal_number(i64 m, i64 x);

i128 eval_form(const MGonalForm& f, std::span<const i64> x);

// Largest X such that every x with P_m(x) <= n satisfies |x| <= X.
i64 coordinate_bound(i64 m, i128 n);

// x with P_m(x) == n (least |x|, then positive first), if any.
std::optional<i64> polygonal_root(i64 m, i128 n);

// Distinct values P_m(x) <= n in increasing order, each with the x of least |x|.
std::vector<std::pair<i64, i64>> polygonal_values(i64 m, i64 n);

std::optional<RepresentationWitness> is_represented(const MGonalForm& f, i64 target);

TruantRecord truant(const MGonalForm& f, i64 cap);

// Set of represented values in [0, cap], by forward enumeration.
Bitmap represented_bitmap(const MGonalForm& f, i64 cap);
Bitmap represented_bitmap_serial(const MGonalForm& f, i64 cap);

// One enumeration step: out = in + c * {P_m values}, truncated at out.size().
void add_coefficient(Bitmap& out, const Bitmap& in, i64 m, i64 c);
void add_coefficient_serial(Bitmap& out, const Bitmap& in, i64 m, i64 c);

void validate_cap(i64 m, i64 cap);

}  // namespace polyuniv::polyform
