#pragma once

// Grid kernels over a read-only snapshot of B_1..B_N (B[i] holds B_{i+1}).
// Each kernel has an OpenMP version and a serial reference kept for testing;
// both produce identical reports.

#include "edsfrey/eds.hpp"

#include <span>

namespace edsfrey::kernels {

namespace serial {
StrongDivisibilityReport strong_divisibility(std::span<const Integer> B, unsigned long max_index);
ValuationGridReport valuation_grid(std::span<const Integer> B, unsigned long max_product, bool a1_even);
std::vector<Integer> primitive_cofactors(std::span<const Integer> B, unsigned long from, unsigned long to);
}  // namespace serial

namespace omp {
StrongDivisibilityReport strong_divisibility(std::span<const Integer> B, unsigned long max_index);
ValuationGridReport valuation_grid(std::span<const Integer> B, unsigned long max_product, bool a1_even);
std::vector<Integer> primitive_cofactors(std::span<const Integer> B, unsigned long from, unsigned long to);
}  // namespace omp

// Shared per-cell work.
bool strong_divisibility_cell(std::span<const Integer> B, unsigned long m, unsigned long n);
ValuationGridEntry valuation_cell(std::span<const Integer> B, unsigned long n, unsigned long m, bool a1_even);
Integer primitive_cofactor(std::span<const Integer> B, unsigned long n);

}  // namespace edsfrey::kernels
