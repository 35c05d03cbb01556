#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace flattrans {

/// Non-owning reference to a callable. The referenced callable must outlive
/// every call made through the reference.
template <class Sig>
class FunctionRef;

template <class R, class... Args>
class FunctionRef<R(Args...)> {
 public:
  template <class F>
    requires(!std::is_same_v<std::remove_cvref_t<F>, FunctionRef> &&
             std::is_invocable_r_v<R, F&, Args...>)
  FunctionRef(F&& f) noexcept  // NOLINT(google-explicit-constructor)
      : obj_(const_cast<void*>(static_cast<const void*>(std::addressof(f)))),
        call_([](void* obj, Args... args) -> R {
          return (*static_cast<std::remove_reference_t<F>*>(obj))(std::forward<Args>(args)...);
        }) {}

  R operator()(Args... args) const { return call_(obj_, std::forward<Args>(args)...); }

 private:
  void* obj_;
  R (*call_)(void*, Args...);
};

/// A non-deterministic computation: a possibly empty, lazily enumerated
/// sequence of alternatives. Enumeration is left-biased depth-first and
/// stops as soon as the consumer asks it to, so later alternatives are never
/// forced when only the first value is wanted.
///
/// A default-constructed Choices is failure (no values).
template <class T>
class Choices {
 public:
  using value_type = T;
  /// Receives one value; returns false to stop the enumeration.
  using Sink = FunctionRef<bool(const T&)>;
  /// Feeds values to the sink; returns false iff the sink stopped it.
  using Enumerator = std::function<bool(Sink)>;

  Choices() = default;
  explicit Choices(Enumerator enumerate) : enumerate_(std::move(enumerate)) {}

  static Choices fail() { return Choices(); }

  static Choices pure(T value) {
    return Choices([value = std::move(value)](Sink k) { return k(value); });
  }

  static Choices from(std::vector<T> values) {
    if (values.empty()) return fail();
    if (values.size() == 1) return pure(std::move(values.front()));
    auto shared = std::make_shared<const std::vector<T>>(std::move(values));
    return Choices([shared](Sink k) {
      for (const auto& v : *shared) {
        if (!k(v)) return false;
      }
      return true;
    });
  }

  static Choices lift(std::optional<T> value) {
    return value ? pure(std::move(*value)) : fail();
  }

  /// Builds the computation only when it is enumerated. Needed for
  /// recursively defined, possibly infinite, alternatives.
  static Choices defer(std::function<Choices()> make) {
    return Choices([make = std::move(make)](Sink k) { return make().each(k); });
  }

  /// True when this value is syntactically failure. A computation can still
  /// turn out to have no values even when this returns false.
  bool is_fail() const { return !enumerate_; }

  bool each(Sink sink) const { return !enumerate_ || enumerate_(sink); }

  /// Sequencing: every value of this computation is fed to `f` and the
  /// alternatives of the results are enumerated in order.
  template <class F>
  auto bind(F f) const {
    using Result = std::invoke_result_t<F&, const T&>;
    using U = typename Result::value_type;
    if (is_fail()) return Choices<U>();
    return Choices<U>([self = *this, f = std::move(f)](typename Choices<U>::Sink k) {
      return self.each([&](const T& x) { return f(x).each(k); });
    });
  }

  template <class F>
  auto map(F f) const {
    using U = std::invoke_result_t<F&, const T&>;
    if (is_fail()) return Choices<U>();
    return Choices<U>([self = *this, f = std::move(f)](typename Choices<U>::Sink k) {
      return self.each([&](const T& x) { return k(f(x)); });
    });
  }

  template <class P>
  Choices filter(P keep) const {
    if (is_fail()) return Choices();
    return Choices([self = *this, keep = std::move(keep)](Sink k) {
      return self.each([&](const T& x) { return !keep(x) || k(x); });
    });
  }

 private:
  Enumerator enumerate_;
};

/// The choice operator: all values of `a`, then all values of `b`.
template <class T>
Choices<T> choose(Choices<T> a, Choices<T> b) {
  if (a.is_fail()) return b;
  if (b.is_fail()) return a;
  return Choices<T>([a = std::move(a), b = std::move(b)](typename Choices<T>::Sink k) {
    return a.each(k) && b.each(k);
  });
}

/// First value in enumeration order, or nothing when there is none.
template <class T>
std::optional<T> one_value(const Choices<T>& c) {
  std::optional<T> out;
  c.each([&](const T& x) {
    out.emplace(x);
    return false;
  });
  return out;
}

/// Complete enumeration. Does not terminate on infinite computations.
template <class T>
std::vector<T> all_values(const Choices<T>& c) {
  std::vector<T> out;
  c.each([&](const T& x) {
    out.push_back(x);
    return true;
  });
  return out;
}

}  // namespace flattrans
