#pragma once

// Memo table with single materialization per key, and a minimal parallel_for.

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace canonweil {

template <class Key, class Value, class Compare = std::less<Key>>
class ConcurrentMemo {
 public:
  /// Computes the value for `key` at most once; concurrent callers for the same key wait for it.
  template <class Fn>
  const Value& get_or_compute(const Key& key, Fn&& compute) {
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard lock(mutex_);
      auto& s = slots_[key];
      if (!s) s = std::make_shared<Slot>();
      slot = s;
    }
    std::call_once(slot->once, [&] { slot->value = std::make_unique<Value>(compute()); });
    return *slot->value;
  }

  size_t size() const {
    std::lock_guard lock(mutex_);
    return slots_.size();
  }

 private:
  struct Slot {
    std::once_flag once;
    std::unique_ptr<Value> value;
  };
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<Slot>, Compare> slots_;
};

inline unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs fn(i) for i in [0, count) on a pool of workers; rethrows the first exception.
template <class Fn>
void parallel_for(size_t count, Fn&& fn, unsigned workers = worker_count()) {
  workers = static_cast<unsigned>(std::min<size_t>(workers, count));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace canonweil
