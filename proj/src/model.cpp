#include "dupeq/model.hpp"

#include <charconv>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dupeq {

namespace {

void check_x(long x) {
  if (x < 3) throw std::domain_error("utility model: x < 3");
}

void check_m(long m) {
  if (m < 0) throw std::domain_error("utility model: m < 0");
}

using Factory = std::function<UtilityModel(std::string_view)>;

std::map<std::string, Factory, std::less<>>& registry() {
  static std::map<std::string, Factory, std::less<>> r = {
      {"le",
       [](std::string_view args) {
         if (!args.empty())
           throw std::invalid_argument("model 'le' takes no arguments");
         return leader_election_model();
       }},
      {"ks",
       [](std::string_view args) {
         long k = 0;
         auto [ptr, ec] =
             std::from_chars(args.data(), args.data() + args.size(), k);
         if (ec != std::errc{} || ptr != args.data() + args.size())
           throw std::invalid_argument("model 'ks' expects ks:<k>");
         return knowledge_sharing_model(k);
       }},
  };
  return r;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

UtilityModel leader_election_model() {
  UtilityModel model;
  model.name = "le";
  model.e0 = [](long x) {
    check_x(x);
    return Rational(1, x);
  };
  model.em = [](long x, long m) {
    check_x(x);
    check_m(m);
    return make_rational(1 + m, x + m);
  };
  model.hints.linear_threshold = true;
  model.hints.limited_dup = 1;
  return model;
}

UtilityModel knowledge_sharing_model(long k) {
  if (k < 2) throw std::domain_error("knowledge sharing: k < 2");
  UtilityModel model;
  model.name = "ks:" + std::to_string(k);
  model.e0 = [k](long x) {
    check_x(x);
    return Rational(1, k);
  };
  model.em = [k](long x, long m) {
    check_x(x);
    check_m(m);
    return x <= m ? Rational(1) : Rational(1, k);
  };
  model.hints.linear_threshold = true;
  // No limited-duplications claim: the cheat utility can have more than
  // one local maximum in m, so no single m' is trusted here.
  return model;
}

UtilityModel parse_model(std::string_view selection) {
  std::string_view key = selection;
  std::string_view args;
  if (auto colon = selection.find(':'); colon != std::string_view::npos) {
    key = selection.substr(0, colon);
    args = selection.substr(colon + 1);
  }
  Factory factory;
  {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(key);
    if (it == registry().end())
      throw std::invalid_argument("unknown model: " + std::string(selection));
    factory = it->second;
  }
  return factory(args);
}

void register_model_factory(std::string key, Factory factory) {
  std::lock_guard lock(registry_mutex());
  registry()[std::move(key)] = std::move(factory);
}

}  // namespace dupeq
