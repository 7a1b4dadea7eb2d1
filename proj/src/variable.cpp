#include "expq/variable.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace expq {
namespace {

struct Registry {
  std::shared_mutex mutex;
  std::deque<VariableInfo> infos;
  std::unordered_map<std::string, const VariableInfo*> byName;
  std::unordered_map<std::string, std::uint64_t> counters;
};

Registry& registry() {
  static Registry r;
  return r;
}

const VariableInfo* insertLocked(Registry& r, const std::string& name) {
  VariableInfo info{static_cast<std::uint32_t>(r.infos.size()), name,
                    std::hash<std::string>{}(name)};
  r.infos.push_back(std::move(info));
  const VariableInfo* p = &r.infos.back();
  r.byName.emplace(name, p);
  return p;
}

}  // namespace

Variable Variable::intern(std::string_view name) {
  Registry& r = registry();
  std::string key(name);
  {
    std::shared_lock lock(r.mutex);
    auto it = r.byName.find(key);
    if (it != r.byName.end()) return Variable(it->second);
  }
  std::unique_lock lock(r.mutex);
  auto it = r.byName.find(key);
  if (it != r.byName.end()) return Variable(it->second);
  return Variable(insertLocked(r, key));
}

Variable Variable::fresh(std::string_view prefix) {
  Registry& r = registry();
  std::unique_lock lock(r.mutex);
  std::string base(prefix);
  std::uint64_t& counter = r.counters[base];
  for (;;) {
    std::string name = base + "_" + std::to_string(++counter);
    if (r.byName.find(name) == r.byName.end()) return Variable(insertLocked(r, name));
  }
}

bool Variable::exists(std::string_view name) {
  Registry& r = registry();
  std::shared_lock lock(r.mutex);
  return r.byName.find(std::string(name)) != r.byName.end();
}

}  // namespace expq
