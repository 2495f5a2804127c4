#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "solb/olocal.hpp"

namespace solb {

// Base for algorithms that remember their own decisions by token. On a later
// query they read off the orientation of every edge to an already decided
// neighbour, so their outputs never conflict with each other.
class Remembering : public Algorithm {
 public:
  void init(long long n, int L, std::uint64_t seed) override;
  std::optional<std::string> state_key() const override;

 protected:
  // Per port of the centre: the orientation forced by a decided neighbour, or
  // nothing when the edge is still free.
  std::vector<std::optional<Orient>> forced(const View& view) const;
  // Forced edges as given; if none of them points out, free_out goes out;
  // every other free edge points in so that neighbours gain an out-edge.
  static Decision complete(const std::vector<std::optional<Orient>>& forced, int free_out);
  void remember(const View& view, const Decision& d) { decided_[view.center().token] = d; }

  long long n_ = 0;
  int L_ = 0;
  std::uint64_t seed_ = 0;

 private:
  std::map<int, Decision> decided_;
};

// "port<k>-det", "uniform-single-out", "adversarial-worst", "greedy-lowest-free",
// "random-greedy", "random-pref", "leafward", or "plugin:<path>[:<options>]".
// Throws usage_error for anything else.
std::unique_ptr<Algorithm> make_algorithm(const std::string& spec);

// Names accepted by make_algorithm, with port<k>-det listed as port1-det.
std::vector<std::string> builtin_algorithms();

// Stable 64-bit FNV-1a hash, used to derive view-dependent choices.
std::uint64_t fnv1a(const std::string& s, std::uint64_t basis = 14695981039346656037ull);

}  // namespace solb

// A plugin exports this symbol; options is the text after the second colon.
extern "C" {
typedef solb::Algorithm* (*solb_create_algorithm_fn)(const char* options);
}
