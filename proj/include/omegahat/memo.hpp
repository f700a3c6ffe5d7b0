#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace omegahat {

/// Thread-safe memo table in front of a pure function. Copies share the table.
template <class Key, class Value>
class Memo {
 public:
  using Fn = std::function<Value(const Key&)>;

  Memo() = default;
  explicit Memo(Fn fn) : state_(std::make_shared<State>(std::move(fn))) {}

  Value operator()(const Key& key) const {
    {
      std::lock_guard lock(state_->mutex);
      auto it = state_->table.find(key);
      if (it != state_->table.end()) return it->second;
    }
    // Evaluated outside the lock: the function may recurse into other memos.
    Value v = state_->fn(key);
    std::lock_guard lock(state_->mutex);
    return state_->table.emplace(key, std::move(v)).first->second;
  }

  bool valid() const { return static_cast<bool>(state_); }
  std::size_t size() const {
    std::lock_guard lock(state_->mutex);
    return state_->table.size();
  }

 private:
  struct State {
    explicit State(Fn f) : fn(std::move(f)) {}
    Fn fn;
    std::mutex mutex;
    std::map<Key, Value> table;
  };
  std::shared_ptr<State> state_;
};

}  // namespace omegahat
