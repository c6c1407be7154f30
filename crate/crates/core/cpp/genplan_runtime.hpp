// Support code for emitted plan validators.
#ifndef GENPLAN_RUNTIME_HPP
#define GENPLAN_RUNTIME_HPP

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <string>
#include <vector>

namespace genplan {

// Integer-valued fluent table keyed by object-index tuples. Reads outside
// the declared ranges return 0 and never change the table.
class Table {
 public:
  explicit Table(std::initializer_list<int> dims) : dims_(dims) {
    std::size_t size = 1;
    for (int d : dims_) size *= static_cast<std::size_t>(d > 0 ? d : 0);
    values_.assign(size, 0);
  }

  long long get(std::initializer_list<int> key) const {
    std::size_t o = 0;
    if (!offset(key, o)) return 0;
    return values_[o];
  }

  void set(std::initializer_list<int> key, long long v) {
    std::size_t o = 0;
    if (offset(key, o)) values_[o] = v;
  }

 private:
  bool offset(std::initializer_list<int> key, std::size_t& o) const {
    if (key.size() != dims_.size()) return false;
    const int* d = dims_.data();
    for (int k : key) {
      if (k < 0 || k >= *d) return false;
      o = o * static_cast<std::size_t>(*d) + static_cast<std::size_t>(k);
      ++d;
    }
    return true;
  }

  std::vector<int> dims_;
  std::vector<long long> values_;
};

inline std::string& plan_buffer() {
  static std::string buffer;
  return buffer;
}

inline void flush_plan() {
  std::string& b = plan_buffer();
  std::fwrite(b.data(), 1, b.size(), stdout);
  b.clear();
}

// Appends one applied action, printed as `(name o1 o2 ...)`.
inline void record(const char* action, std::initializer_list<const char*> objects) {
  std::string& b = plan_buffer();
  b += '(';
  b += action;
  for (const char* o : objects) {
    b += ' ';
    b += o;
  }
  b += ")\n";
  if (b.size() > (1u << 20)) flush_plan();
}

[[noreturn]] inline void overflow(const char* action) {
  flush_plan();
  std::fprintf(stdout, "error=overflow in %s\n", action);
  std::fflush(stdout);
  std::exit(1);
}

inline long long add(long long a, long long b, const char* action) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) overflow(action);
  return r;
}

inline long long sub(long long a, long long b, const char* action) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) overflow(action);
  return r;
}

using Clock = std::chrono::steady_clock;

inline long long elapsed_ms(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
}

// Prints the recorded plan followed by the verdict footer.
inline void report(long long attempted, bool goal, long long elapsed) {
  flush_plan();
  std::printf("attempted=%lld\ngoal=%s\ntime_ms=%lld\n", attempted, goal ? "true" : "false", elapsed);
  std::fflush(stdout);
}

}  // namespace genplan

#endif
