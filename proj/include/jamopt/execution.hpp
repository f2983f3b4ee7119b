#pragma once

namespace jamopt {

/// Selects between the serial reference path and the OpenMP path of a kernel.
/// Both paths produce bit-identical results.
enum class Execution { Serial, Parallel };

/// Threads the OpenMP runtime will use (1 when built without OpenMP).
int max_threads();

}  // namespace jamopt
