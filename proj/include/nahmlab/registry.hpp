#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nahmlab/products.hpp"

namespace nahmlab {

// Grammar atoms backed by the other modules:
//   nahm(A | B | C)          Nahm sum, A as in parse_matrix
//   chi0(s1,...,sr [| signs]) tadpole sum at q^s_i, optional +/- per variable
//   hsum(a,b,m,s)            sum q^(a n^2 + b n)/(q;q)_(m n + s)
//   Z(i), W(i)               Rogers-type characters and theta/eta pair
//   ch35(r,s)                (3,5) minimal-model character
//   tres(a,m)                sum over n = a mod m of n q^(n^2)
//   lsum(alpha,beta,a,b)     sum over Z of (alpha n + beta) q^(a n^2 + b n)
//   E2, E4, E6               Eisenstein series
//   tildeF(i), gbasis(i)     shifted rank-3 tadpole sums and their sum/difference basis
const Registry& default_registry();

// Splits at top-level occurrences of any character in seps; trims blanks.
std::vector<std::string> split_args(std::string_view text, std::string_view seps);
std::int64_t parse_int(std::string_view text);

}  // namespace nahmlab
