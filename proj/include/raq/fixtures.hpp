#pragma once

// Parameterised automaton families used as test fixtures.

#include "raq/automaton.hpp"

namespace raq {

// States q0..qn with qn final and output y_l. Control variables x1..xk form a
// binary counter next to two read-only registers holding 0 and 1; data starts
// at (1, 0, ..., 0). From every state, transition t_{i,0} fires when all bits
// are 1, clears them and rotates the data right; t_{i,j} (1 ≤ j ≤ k) fires when
// x_j = 0 and x_1..x_{j-1} = 1, increments the counter and keeps the data.
// Every transition moves q_i to q_{(i+1) mod (n+1)}; with self_loops the
// increments t_{i,j} stay in q_i instead.
Raq tightness_raq(int k, int l, int n, bool self_loops = false);

}  // namespace raq
