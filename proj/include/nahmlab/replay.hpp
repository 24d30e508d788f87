#pragma once

#include "nahmlab/series.hpp"

namespace nahmlab {

// Constant-term forms of the six rank-3 tadpole sums at base q^2: each
// chi0(s; q^2) equals a z-free prefactor times CT of a product of
// (x z^s; q^2)_inf factors divided by one more such factor.
inline constexpr int kReplayCount = 6;

// chi0 at the i-th shift vector with q -> q^2, exponents below depth
QSeries replay_target(int i, Exponent depth);
// prefactor * CT[integrand], z-window widened by `widen` beyond ct_window
QSeries replay_constant_term(int i, Exponent depth, std::int64_t widen = 0);

}  // namespace nahmlab
