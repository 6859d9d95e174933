// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace maxtev
{

// Thread count: SetThreadCap value if >= 1, else MAXTEV_THREADS if set (>= 1),
// else hardware concurrency.
int MaxThreads();
void SetThreadCap(int cap);  // 0 restores the default

// Splits [0, n) into contiguous chunks, one per worker, and runs
// fn(chunk_index, begin, end). Returns the number of chunks used; chunk
// indices follow range order so callers can merge deterministically.
int ParallelChunks(std::size_t n, const std::function<void(int, std::size_t, std::size_t)> &fn);

}  // namespace maxtev
