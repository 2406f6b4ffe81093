#pragma once

namespace core {

// Execution policy for the data-parallel kernels. Every parallel kernel has a
// serial twin producing bit-identical results; tests compare the two.
enum class Exec { serial, parallel };

} // namespace core
