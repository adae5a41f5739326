#pragma once

namespace chargedrop::capacity {

// Analytically continued lattice sum Z_k(s) = sum over nonzero n in Z^k of
// |n|^-s, for 0 < s < k, evaluated by Ewald splitting. Negative in that range:
// Z_1(1/2) = 2 zeta(1/2), Z_2(1) = -3.9002649...
double lattice_zeta(int k, double s);

// Self-energy integral of the uniform measure on a unit segment (k = 1, length
// 1), unit disk (k = 2) or unit ball (k = 3): int int |x - y|^-s dx dy.
double unit_body_self_energy(int k, double s);

}  // namespace chargedrop::capacity
