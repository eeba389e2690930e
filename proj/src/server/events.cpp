#include "narrascope/server/events.hpp"

#include <algorithm>

namespace narrascope::server {

std::string format_sse(const Event& event) {
  std::string out = "id: " + std::to_string(event.id) + "\nevent: " + event.name + "\n";
  // Multi-line payloads need one data: line each.
  std::size_t pos = 0;
  while (true) {
    const auto eol = event.data.find('\n', pos);
    out += "data: " + event.data.substr(pos, eol - pos) + "\n";
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  out += "\n";
  return out;
}

std::optional<Event> Subscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  Event e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

bool Subscription::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

std::size_t Subscription::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

void Subscription::push(const Event& event) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    if (queue_.size() >= kCapacity) {
      queue_.pop_front();
      ++dropped_;
    }
    queue_.push_back(event);
  }
  cv_.notify_all();
}

void Subscription::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::shared_ptr<Subscription> EventBroker::subscribe() {
  auto sub = std::make_shared<Subscription>();
  std::lock_guard lock(mu_);
  if (closed_) {
    sub->close();
  } else {
    subs_.push_back(sub);
  }
  return sub;
}

void EventBroker::unsubscribe(const std::shared_ptr<Subscription>& sub) {
  std::lock_guard lock(mu_);
  subs_.erase(std::remove(subs_.begin(), subs_.end(), sub), subs_.end());
}

void EventBroker::publish(std::string name, std::string data) {
  std::vector<std::shared_ptr<Subscription>> targets;
  Event event;
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    event = {next_id_++, std::move(name), std::move(data)};
    targets = subs_;
  }
  for (const auto& s : targets) s->push(event);
}

void EventBroker::close() {
  std::vector<std::shared_ptr<Subscription>> targets;
  {
    std::lock_guard lock(mu_);
    closed_ = true;
    targets.swap(subs_);
  }
  for (const auto& s : targets) s->close();
}

std::size_t EventBroker::subscriber_count() const {
  std::lock_guard lock(mu_);
  return subs_.size();
}

}  // namespace narrascope::server
