// Test plugin: deterministic, orients port k out where k is the option text.
#include <string>

#include "solb/olocal.hpp"

namespace {

class PluginPortK final : public solb::Algorithm {
 public:
  explicit PluginPortK(int k) : k_(k) {}
  std::string name() const override { return "plugin-port" + std::to_string(k_); }
  void init(long long, int, std::uint64_t) override {}
  solb::Decision decide(const solb::View& view) override {
    solb::Decision d;
    d.ports.assign(view.center().degree, solb::Orient::in);
    if (!d.ports.empty()) d.ports[std::min<std::size_t>(k_, d.ports.size()) - 1] = solb::Orient::out;
    return d;
  }
  std::unique_ptr<solb::Algorithm> clone() const override { return std::make_unique<PluginPortK>(*this); }
  bool deterministic() const override { return true; }

 private:
  int k_;
};

}  // namespace

extern "C" solb::Algorithm* solb_create_algorithm(const char* options) {
  int k = options && *options ? std::atoi(options) : 1;
  if (k < 1) return nullptr;
  return new PluginPortK(k);
}
