#pragma once

namespace dlpkit {

// Verdict of a partial-order comparison.
enum class Ordering { Less, Equal, Greater, Incomparable };

const char* ordering_name(Ordering o);

}  // namespace dlpkit
