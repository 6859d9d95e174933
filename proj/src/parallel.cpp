// Copyright 2026 The maxtev Authors
// SPDX-License-Identifier: Apache-2.0

#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace maxtev
{

namespace
{
std::atomic<int> g_thread_cap{0};
}

void SetThreadCap(int cap) { g_thread_cap = std::max(cap, 0); }

int MaxThreads()
{
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  hw = std::max(hw, 1);
  if (const int cap = g_thread_cap.load(); cap >= 1)
  {
    return std::min(cap, hw);
  }
  if (const char *env = std::getenv("MAXTEV_THREADS"))
  {
    const int cap = std::atoi(env);
    if (cap >= 1)
    {
      return std::min(cap, hw);
    }
  }
  return hw;
}

int ParallelChunks(std::size_t n, const std::function<void(int, std::size_t, std::size_t)> &fn)
{
  const int nthreads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(MaxThreads()),
                                                              std::max<std::size_t>(n / 256, 1)));
  if (nthreads <= 1)
  {
    fn(0, 0, n);
    return 1;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(nthreads);
  for (int c = 0; c < nthreads; ++c)
  {
    const std::size_t begin = n * c / nthreads, end = n * (c + 1) / nthreads;
    workers.emplace_back([&, c, begin, end] {
      try
      {
        fn(c, begin, end);
      }
      catch (...)
      {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto &w : workers)
  {
    w.join();
  }
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
  return nthreads;
}

}  // namespace maxtev
