#pragma once

namespace rasterjoin {

/// Outcome of the intermediate filter for a candidate pair. TrueHit and
/// TrueNegative are guaranteed; Indecisive pairs go to refinement.
enum class Verdict { TrueHit, TrueNegative, Indecisive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::TrueHit: return "true_hit";
    case Verdict::TrueNegative: return "true_negative";
    default: return "indecisive";
  }
}

}  // namespace rasterjoin
