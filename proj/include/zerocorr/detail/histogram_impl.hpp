#pragma once

#include <cstdint>
#include <vector>

namespace zerocorr {

template <typename PointsOf>
void histogram_samples(std::size_t samples, const PointsOf& points_of, double sqrt_n,
                       PairHistogram& h, Exec exec) {
    const double width = h.bin_width();
    const auto n = static_cast<std::int64_t>(samples);
    if (exec == Exec::serial) {
        for (std::int64_t i = 0; i < n; ++i) {
            const ZeroSet zs = points_of(static_cast<std::uint64_t>(i));
            accumulate_pairs(zs.affine_roots, zs.roots_at_infinity, sqrt_n, width, h.counts);
        }
    } else {
#pragma omp parallel num_threads(worker_count())
        {
            std::vector<std::uint64_t> local(h.counts.size(), 0);
#pragma omp for schedule(dynamic, 8)
            for (std::int64_t i = 0; i < n; ++i) {
                const ZeroSet zs = points_of(static_cast<std::uint64_t>(i));
                accumulate_pairs(zs.affine_roots, zs.roots_at_infinity, sqrt_n, width, local);
            }
#pragma omp critical(zerocorr_histogram_merge)
            for (std::size_t b = 0; b < local.size(); ++b) h.counts[b] += local[b];
        }
    }
    h.samples += samples;
}

}  // namespace zerocorr
