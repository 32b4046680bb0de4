#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sf/core/types.hpp"

namespace sf::training {

/// Truncates to `length` fixations, or linearly interpolates along the
/// fixation index when shorter (first and last fixations are kept).
Scanpath harmonize_length(const Scanpath& sp, int length);

/// Stable 64-bit FNV-1a hash of an image id.
std::uint64_t image_key(const std::string& image_id);

/// Observer chosen for `image_key` at `step`. The draw is uniform and held
/// for `period` consecutive steps (steps [k*period, (k+1)*period) share it);
/// period <= 0 holds one draw for the whole run.
std::size_t observer_index(std::size_t pool_size, std::uint64_t image_key, std::int64_t step, std::int64_t period,
                           std::uint64_t seed);

/// Ground-truth scanpath used as the "real" sample for an image at `step`,
/// harmonized to `length` fixations. Throws EmptyPool.
Scanpath sample_real(const ObserverPool& pool, std::int64_t step, std::int64_t period, std::uint64_t seed, int length);

}  // namespace sf::training
