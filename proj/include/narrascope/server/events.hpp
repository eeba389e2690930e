#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace narrascope::server {

struct Event {
  std::uint64_t id = 0;
  std::string name;  // "snapshot" or "cycle"
  std::string data;  // one-line JSON
};

// "id:", "event:" and "data:" lines plus the blank terminator.
std::string format_sse(const Event& event);

class EventBroker;

// One subscriber's queue. Publishing never blocks on a slow reader: the
// oldest events are dropped once the queue is full.
class Subscription {
 public:
  // Next event, or nullopt on timeout or once the broker is closed.
  std::optional<Event> next(std::chrono::milliseconds timeout);
  bool closed() const;
  std::size_t dropped() const;

 private:
  friend class EventBroker;
  static constexpr std::size_t kCapacity = 256;

  void push(const Event& event);
  void close();

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Event> queue_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

class EventBroker {
 public:
  std::shared_ptr<Subscription> subscribe();
  void unsubscribe(const std::shared_ptr<Subscription>& sub);
  void publish(std::string name, std::string data);
  // Wakes and closes every subscriber; later subscriptions start closed.
  void close();
  std::size_t subscriber_count() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::shared_ptr<Subscription>> subs_;
  std::uint64_t next_id_ = 1;
  bool closed_ = false;
};

}  // namespace narrascope::server
