#pragma once

namespace clsq {

// Factorization type of a rational prime in a cubic field: residue degrees
// 1+1+1, 1+2, 3 (unramified), 1+1^2 (partially ramified), 1^3 (totally
// ramified; never occurs at fundamental discriminants).
enum class LocalCubicType { split_111, partial_12, inert_3, ram_21, ram_111_tot };

inline const char* to_string(LocalCubicType t) {
    switch (t) {
        case LocalCubicType::split_111: return "split_111";
        case LocalCubicType::partial_12: return "partial_12";
        case LocalCubicType::inert_3: return "inert_3";
        case LocalCubicType::ram_21: return "ram_21";
        default: return "ram_111_tot";
    }
}

}  // namespace clsq
