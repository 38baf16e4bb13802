#pragma once

// Hand-built variants of the single-bottleneck scheme (m = 3) used by the
// legality, serialization and engine tests.

#include "dofnet/scheme.hpp"

namespace dofnet::testing {

/// v2 scales its slot-2 resend of L1 by h_{v3,w}[2], a gain of the same slot
/// on another node's edge.
Scheme illegal_instantaneous_gain();

/// As above with h_{v3,w}[3], which has not happened yet.
Scheme illegal_future_gain();

/// v1 (which only ever hears s1) is asked to send the form h·b1.
Scheme illegal_missing_symbols();

/// Legal and decodable: v2's resend written as a two-term combination and v1
/// scaling a1 by its own incoming gain.
Scheme combo_scheme();

/// Legal but not executable: u1 hears h·b1 + h'·b2 in slot 1 and is asked to
/// send b1 alone.
Scheme rank_deficient_scheme();

}  // namespace dofnet::testing
