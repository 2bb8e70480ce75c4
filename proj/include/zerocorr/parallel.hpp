#pragma once

#include <cstddef>

namespace zerocorr {

/// Every data-parallel kernel keeps its plain serial loop next to the
/// OpenMP loop. Both produce bit-identical results: reductions always run
/// over fixed-size chunks that are combined in chunk order.
enum class Exec { serial, parallel };

/// Samples per reduction chunk; independent of the number of workers.
inline constexpr std::size_t kReductionChunk = 1024;

/// Worker count for OpenMP regions. Reads ZEROCORR_THREADS when no explicit
/// count has been set; falls back to the OpenMP default.
int worker_count();
void set_worker_count(int threads);

inline constexpr const char* kThreadsEnvVar = "ZEROCORR_THREADS";

}  // namespace zerocorr
