#pragma once

#include <atomic>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace gobrowse::explorer {

// Evaluates fn(0..n-1) on up to `workers` threads and returns the results in
// index order, so callers see the same sequence regardless of scheduling.
// With one worker the calls run inline. Exceptions surface in index order
// after all workers finish.
template <typename Fn>
auto ordered_parallel(int n, int workers, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, int>> {
  using R = std::invoke_result_t<Fn&, int>;
  std::vector<std::optional<R>> slots(n);
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) slots[i] = fn(i);
  } else {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<int> next{0};
    auto work = [&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          slots[i] = fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> threads;
    const int count = std::min(workers, n);
    threads.reserve(count);
    for (int t = 0; t < count; ++t) threads.emplace_back(work);
    for (auto& thread : threads) thread.join();
    for (int i = 0; i < n; ++i)
      if (errors[i]) std::rethrow_exception(errors[i]);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace gobrowse::explorer
