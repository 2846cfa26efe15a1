#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>

namespace mm {

enum class OverflowPolicy {
  Block,       // producer waits for space; nothing is ever dropped
  DropOldest,  // producer evicts the oldest queued item
};

/// Bounded multi-producer multi-consumer queue handing frames from an
/// acquisition context to the single engine writer. Order is preserved.
template <typename T>
class BoundedFifo {
 public:
  BoundedFifo(std::size_t capacity, OverflowPolicy policy) : capacity_(capacity ? capacity : 1), policy_(policy) {}

  /// Returns the evicted item under DropOldest, if any. Returns nullopt
  /// without enqueuing once the queue is closed.
  std::optional<T> push(T item) {
    std::unique_lock lock(mu_);
    std::optional<T> evicted;
    not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_ || policy_ != OverflowPolicy::Block; });
    if (!closed_ && items_.size() >= capacity_) {
      evicted = std::move(items_.front());
      items_.pop_front();
      ++dropped_;
    }
    if (closed_) return evicted;
    items_.push_back(std::move(item));
    not_empty_.notify_one();
    return evicted;
  }

  /// Blocks until an item is available; nullopt once closed and drained.
  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void set_policy(OverflowPolicy policy) {
    std::lock_guard lock(mu_);
    policy_ = policy;
    not_full_.notify_all();
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }

  std::size_t dropped() const {
    std::lock_guard lock(mu_);
    return dropped_;
  }

 private:
  mutable std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<T> items_;
  std::size_t capacity_;
  OverflowPolicy policy_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

}  // namespace mm
