#pragma once

namespace windwoa {

/// Selects between the serial reference path and the OpenMP path of a kernel.
/// Both paths produce bit-identical results: parallel loops only write
/// disjoint outputs and every reduction is performed serially afterwards.
enum class ExecPolicy { serial, parallel };

}  // namespace windwoa
