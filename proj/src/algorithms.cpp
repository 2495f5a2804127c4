#include "solb/algorithms.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "solb/errors.hpp"

namespace solb {

std::uint64_t fnv1a(const std::string& s, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void Remembering::init(long long n, int L, std::uint64_t seed) {
  n_ = n;
  L_ = L;
  seed_ = seed;
  decided_.clear();
}

std::optional<std::string> Remembering::state_key() const {
  std::string key;
  for (const auto& [token, d] : decided_) key += std::to_string(token) + '=' + d.str() + ';';
  return key;
}

std::vector<std::optional<Orient>> Remembering::forced(const View& view) const {
  const ViewNode& c = view.center();
  std::vector<std::optional<Orient>> result(c.degree);
  for (int p = 1; p <= c.degree; ++p) {
    int t = c.ports[p - 1];
    auto it = decided_.find(t);
    if (t == kOutside || it == decided_.end()) continue;
    const ViewNode* w = view.find(t);
    auto back = std::find(w->ports.begin(), w->ports.end(), c.token);
    int q = static_cast<int>(back - w->ports.begin()) + 1;
    result[p - 1] = it->second.out(q) ? Orient::in : Orient::out;
  }
  return result;
}

Decision Remembering::complete(const std::vector<std::optional<Orient>>& forced, int free_out) {
  bool satisfied = std::any_of(forced.begin(), forced.end(), [](auto o) { return o == Orient::out; });
  Decision d;
  for (std::size_t k = 0; k < forced.size(); ++k) {
    if (forced[k]) d.ports.push_back(*forced[k]);
    else d.ports.push_back(!satisfied && static_cast<int>(k) + 1 == free_out ? Orient::out : Orient::in);
  }
  return d;
}

namespace {

std::vector<int> free_ports(const std::vector<std::optional<Orient>>& forced) {
  std::vector<int> ports;
  for (std::size_t k = 0; k < forced.size(); ++k)
    if (!forced[k]) ports.push_back(static_cast<int>(k) + 1);
  return ports;
}

class PortDet final : public Algorithm {
 public:
  explicit PortDet(int k) : k_(k) {}
  std::string name() const override { return "port" + std::to_string(k_) + "-det"; }
  void init(long long, int, std::uint64_t) override {}
  Decision decide(const View& view) override {
    int deg = view.center().degree;
    if (deg == 0) return {};
    return Decision::single_out(deg, std::min(k_, deg));
  }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<PortDet>(*this); }
  bool deterministic() const override { return true; }
  std::optional<std::string> state_key() const override { return ""; }

 private:
  int k_;
};

// Randomised, memoryless: one uniformly chosen edge points out.
class UniformSingleOut final : public Algorithm {
 public:
  std::string name() const override { return "uniform-single-out"; }
  void init(long long, int, std::uint64_t seed) override { rng_.seed(seed); }
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }
  Decision decide(const View& view) override {
    int deg = view.center().degree;
    if (deg == 0) return {};
    return Decision::single_out(deg, 1 + static_cast<int>(rng_() % static_cast<std::uint64_t>(deg)));
  }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<UniformSingleOut>(*this); }
  bool has_distribution() const override { return true; }
  std::vector<std::pair<Decision, Rational>> decision_distribution(const View& view) const override {
    int deg = view.center().degree;
    if (deg == 0) return {{Decision{}, Rational(1)}};
    std::vector<std::pair<Decision, Rational>> dist;
    for (int p = 1; p <= deg; ++p) dist.emplace_back(Decision::single_out(deg, p), Rational(1, deg));
    return dist;
  }
  void commit(const View&, const Decision&) override {}
  std::optional<std::string> state_key() const override { return ""; }

 private:
  std::mt19937_64 rng_;
};

// Memoryless and randomised: with probability 1/deg a view-dependent pivot
// port r < deg points out, otherwise port deg does. Built so that the
// smallest frequent edge is usually not port 1.
class AdversarialWorst final : public Algorithm {
 public:
  std::string name() const override { return "adversarial-worst"; }
  void init(long long, int, std::uint64_t seed) override { rng_.seed(seed); }
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }
  static int pivot(const View& view) {
    int deg = view.center().degree;
    return 1 + static_cast<int>(fnv1a(view.shape()) % static_cast<std::uint64_t>(deg - 1));
  }
  Decision decide(const View& view) override {
    int deg = view.center().degree;
    if (deg == 0) return {};
    if (deg == 1) return Decision::single_out(1, 1);
    bool pick_pivot = rng_() % static_cast<std::uint64_t>(deg) == 0;
    return Decision::single_out(deg, pick_pivot ? pivot(view) : deg);
  }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<AdversarialWorst>(*this); }
  bool has_distribution() const override { return true; }
  std::vector<std::pair<Decision, Rational>> decision_distribution(const View& view) const override {
    int deg = view.center().degree;
    if (deg == 0) return {{Decision{}, Rational(1)}};
    if (deg == 1) return {{Decision::single_out(1, 1), Rational(1)}};
    return {{Decision::single_out(deg, pivot(view)), Rational(1, deg)},
            {Decision::single_out(deg, deg), Rational(deg - 1, deg)}};
  }
  void commit(const View&, const Decision&) override {}
  std::optional<std::string> state_key() const override { return ""; }

 private:
  std::mt19937_64 rng_;
};

class GreedyLowestFree final : public Remembering {
 public:
  std::string name() const override { return "greedy-lowest-free"; }
  Decision decide(const View& view) override {
    auto f = forced(view);
    auto free = free_ports(f);
    Decision d = complete(f, free.empty() ? 0 : free.front());
    remember(view, d);
    return d;
  }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<GreedyLowestFree>(*this); }
  bool deterministic() const override { return true; }
};

// Like greedy-lowest-free, but the out-edge is uniform among the free ports.
class RandomGreedy final : public Remembering {
 public:
  std::string name() const override { return "random-greedy"; }
  void init(long long n, int L, std::uint64_t seed) override {
    Remembering::init(n, L, seed);
    rng_.seed(seed);
  }
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }
  Decision decide(const View& view) override {
    auto f = forced(view);
    auto free = free_ports(f);
    int pick = free.empty() ? 0 : free[rng_() % free.size()];
    Decision d = complete(f, pick);
    remember(view, d);
    return d;
  }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<RandomGreedy>(*this); }
  bool has_distribution() const override { return true; }
  std::vector<std::pair<Decision, Rational>> decision_distribution(const View& view) const override {
    auto f = forced(view);
    auto free = free_ports(f);
    if (free.empty()) return {{complete(f, 0), Rational(1)}};
    std::map<Decision, Rational> merged;
    for (int p : free) merged[complete(f, p)] += Rational(1, static_cast<long>(free.size()));
    return {merged.begin(), merged.end()};
  }
  void commit(const View& view, const Decision& d) override { remember(view, d); }

 private:
  std::mt19937_64 rng_;
};

// Deterministic once seeded: the seed and the view's shape pick a port
// preference order, and the most preferred free port points out.
class RandomPref final : public Remembering {
 public:
  std::string name() const override { return "random-pref"; }
  Decision decide(const View& view) override {
    auto f = forced(view);
    std::vector<int> order(f.size());
    std::iota(order.begin(), order.end(), 1);
    std::mt19937_64 rng(fnv1a(view.shape()) ^ seed_);
    std::shuffle(order.begin(), order.end(), rng);
    int pick = 0;
    for (int p : order)
      if (!f[p - 1]) {
        pick = p;
        break;
      }
    Decision d = complete(f, pick);
    remember(view, d);
    return d;
  }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<RandomPref>(*this); }
  bool deterministic() const override { return true; }
};

// Uses two hops of its view: the out-edge goes to a free neighbour of degree
// below 3 if there is one, else to a free neighbour next to such a node, else
// to the lowest free port.
class Leafward final : public Remembering {
 public:
  std::string name() const override { return "leafward"; }
  Decision decide(const View& view) override {
    auto f = forced(view);
    const ViewNode& c = view.center();
    int pick = 0;
    int best = 3;
    for (int p : free_ports(f)) {
      int score = 2;
      if (const ViewNode* w = view.find(c.ports[p - 1])) {
        if (w->degree < 3) score = 0;
        else
          for (int t : w->ports)
            if (t != kOutside && t != c.token && view.find(t)->degree < 3) score = 1;
      }
      if (score < best) {
        best = score;
        pick = p;
      }
    }
    Decision d = complete(f, pick);
    remember(view, d);
    return d;
  }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<Leafward>(*this); }
  bool deterministic() const override { return true; }
};

// Keeps the shared object loaded for as long as any copy of the algorithm lives.
class Plugin final : public Algorithm {
 public:
  Plugin(std::shared_ptr<void> handle, std::unique_ptr<Algorithm> inner)
      : handle_(std::move(handle)), inner_(std::move(inner)) {}
  ~Plugin() override { inner_.reset(); }
  std::string name() const override { return inner_->name(); }
  void init(long long n, int L, std::uint64_t seed) override { inner_->init(n, L, seed); }
  Decision decide(const View& view) override { return inner_->decide(view); }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<Plugin>(handle_, inner_->clone()); }
  void reseed(std::uint64_t seed) override { inner_->reseed(seed); }
  bool deterministic() const override { return inner_->deterministic(); }
  bool has_distribution() const override { return inner_->has_distribution(); }
  std::vector<std::pair<Decision, Rational>> decision_distribution(const View& view) const override {
    return inner_->decision_distribution(view);
  }
  void commit(const View& view, const Decision& d) override { inner_->commit(view, d); }
  std::optional<std::string> state_key() const override { return inner_->state_key(); }

 private:
  std::shared_ptr<void> handle_;
  std::unique_ptr<Algorithm> inner_;
};

std::unique_ptr<Algorithm> load_plugin(const std::string& rest) {
  std::string path = rest;
  std::string options;
  if (auto colon = rest.find(':'); colon != std::string::npos) {
    path = rest.substr(0, colon);
    options = rest.substr(colon + 1);
  }
  void* raw = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (!raw) throw usage_error("cannot load plugin " + path + ": " + dlerror());
  std::shared_ptr<void> handle(raw, [](void* h) { dlclose(h); });
  auto create = reinterpret_cast<solb_create_algorithm_fn>(dlsym(raw, "solb_create_algorithm"));
  if (!create) throw usage_error("plugin " + path + " does not export solb_create_algorithm");
  std::unique_ptr<Algorithm> inner(create(options.c_str()));
  if (!inner) throw usage_error("plugin " + path + " returned no algorithm for options '" + options + "'");
  return std::make_unique<Plugin>(std::move(handle), std::move(inner));
}

}  // namespace

std::unique_ptr<Algorithm> make_algorithm(const std::string& spec) {
  if (spec.rfind("plugin:", 0) == 0) return load_plugin(spec.substr(7));
  if (spec == "uniform-single-out") return std::make_unique<UniformSingleOut>();
  if (spec == "adversarial-worst") return std::make_unique<AdversarialWorst>();
  if (spec == "greedy-lowest-free") return std::make_unique<GreedyLowestFree>();
  if (spec == "random-greedy") return std::make_unique<RandomGreedy>();
  if (spec == "random-pref") return std::make_unique<RandomPref>();
  if (spec == "leafward") return std::make_unique<Leafward>();
  if (spec.size() > 8 && spec.rfind("port", 0) == 0 && spec.ends_with("-det")) {
    std::string digits = spec.substr(4, spec.size() - 8);
    if (!digits.empty() && digits.size() < 4 && std::all_of(digits.begin(), digits.end(), ::isdigit) &&
        std::stoi(digits) >= 1)
      return std::make_unique<PortDet>(std::stoi(digits));
  }
  throw usage_error("unknown algorithm: " + spec);
}

std::vector<std::string> builtin_algorithms() {
  return {"port1-det", "uniform-single-out", "adversarial-worst", "greedy-lowest-free",
          "random-greedy", "random-pref", "leafward"};
}

}  // namespace solb
