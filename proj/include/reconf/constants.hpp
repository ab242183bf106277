#pragma once

#include <cstdint>

#include "reconf/ratio.hpp"

namespace reconf::constants {

/// Farness margin of the codeword reconfiguration property.
inline const Ratio kDelta0{1, 400};
/// Closeness radius for codewords.
inline const Ratio kQuarter{1, 4};

/// The smallest n for which random codeword paths are guaranteed (with
/// positive probability) to stay far from third codewords.
inline constexpr int kCodewordPathMinN = 9;

// Theoretical parameters of the full alphabet reduction. They assume the
// constant-alphabet inner tester, which this library does not implement, and
// are only ever printed in reports as such.
namespace theoretical {
inline constexpr std::uint64_t kInnerAlphabet = 8;                       // W~0
inline const Ratio kRejectionRate{1, 10000};                             // rho
inline const Ratio kKappaTilde{1, 64LL * 400 * 400 * 10000LL * 10000LL};  // delta0^2 rho^2 / 64
inline const Ratio kKappa{1, 8000LL * 8000 * 8000 * 8000};              // kappa~ / 4
inline constexpr std::uint64_t kFinalAlphabet = 36ULL * 36 * 36 * 36;     // (8*9/2)^4
}  // namespace theoretical

}  // namespace reconf::constants
