// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/error.hpp"

#include <array>
#include <string>
#include <string_view>

namespace polyref {

enum class BoundaryCondition { Dirichlet, Neumann, PEC, PMC, ElasticThird, ElasticFourth };

enum class WaveFamily { Acoustic, Electromagnetic, Elastic };

inline constexpr std::array<BoundaryCondition, 6> all_boundary_conditions{
    BoundaryCondition::Dirichlet, BoundaryCondition::Neumann,      BoundaryCondition::PEC,
    BoundaryCondition::PMC,       BoundaryCondition::ElasticThird, BoundaryCondition::ElasticFourth};

inline WaveFamily family_of(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::Dirichlet:
        case BoundaryCondition::Neumann: return WaveFamily::Acoustic;
        case BoundaryCondition::PEC:
        case BoundaryCondition::PMC: return WaveFamily::Electromagnetic;
        case BoundaryCondition::ElasticThird:
        case BoundaryCondition::ElasticFourth: return WaveFamily::Elastic;
    }
    return WaveFamily::Acoustic;
}

inline std::string to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::Dirichlet: return "dirichlet";
        case BoundaryCondition::Neumann: return "neumann";
        case BoundaryCondition::PEC: return "pec";
        case BoundaryCondition::PMC: return "pmc";
        case BoundaryCondition::ElasticThird: return "elastic_third";
        case BoundaryCondition::ElasticFourth: return "elastic_fourth";
    }
    return "?";
}

inline std::string to_string(WaveFamily f) {
    switch (f) {
        case WaveFamily::Acoustic: return "acoustic";
        case WaveFamily::Electromagnetic: return "electromagnetic";
        case WaveFamily::Elastic: return "elastic";
    }
    return "?";
}

inline BoundaryCondition boundary_condition_from_string(std::string_view s) {
    for (auto bc : all_boundary_conditions)
        if (to_string(bc) == s) return bc;
    throw ParseError("unknown boundary condition '" + std::string(s) + "'");
}

}  // namespace polyref
