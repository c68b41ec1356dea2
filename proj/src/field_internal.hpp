#pragma once

#include "edsfrey/field.hpp"

#include <span>

namespace edsfrey {

struct FieldData {
    std::shared_ptr<const FieldData> parent;
    std::size_t level = 0;
    std::size_t degree = 1;
    std::size_t step_degree = 1;
    std::string name;
    // Monic defining polynomial over the parent (step_degree + 1 vectors)
    // and the reduction rule t^n = sum_j reduction[j] t^j.
    std::vector<QVector> poly;
    std::vector<QVector> reduction;

    // Primitive element data.
    std::vector<Integer> combination;
    QVector gamma;
    ZPoly f;
    Integer disc;
    QMatrix V;     // columns: coordinates of gamma^k
    QMatrix Vinv;
    unsigned r1 = 1, s = 0;
};

namespace detail {

QVector tower_mul(const FieldData& F, std::span<const Rational> a, std::span<const Rational> b);

}  // namespace detail
}  // namespace edsfrey
