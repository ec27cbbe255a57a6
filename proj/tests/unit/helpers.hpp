#pragma once

#include "berkhyb/laurent.hpp"
#include "berkhyb/snc_model.hpp"

#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace testing_util {

using namespace berkhyb;

// Unit-coefficient Laurent polynomial from exponent vectors.
inline LaurentSeries poly(std::vector<std::string> vars, std::initializer_list<Exponent> exps) {
  LaurentSeries f(vars);
  for (auto& e : exps) f.add_term(e, Coefficient::unit());
  return f;
}

inline ModelPtr segment() {
  return std::make_shared<const SncModel>(
      "segment", std::vector<Component>{{"D1", 1}, {"D2", 1}},
      std::vector<Stratum>{{{0}, "D1"}, {{1}, "D2"}, {{0, 1}, "D1+D2"}});
}

inline ModelPtr triangle() {
  return std::make_shared<const SncModel>(
      "triangle", std::vector<Component>{{"D1", 1}, {"D2", 1}, {"D3", 1}},
      std::vector<Stratum>{{{0}, "D1"},
                           {{1}, "D2"},
                           {{2}, "D3"},
                           {{0, 1}, "D1+D2"},
                           {{0, 2}, "D1+D3"},
                           {{1, 2}, "D2+D3"},
                           {{0, 1, 2}, "D1+D2+D3"}});
}

inline ModelPtr blowup() {
  return std::make_shared<const SncModel>(
      "blowup", std::vector<Component>{{"D1p", 1}, {"D2p", 1}, {"E", 2}},
      std::vector<Stratum>{{{0}, "D1p"}, {{1}, "D2p"}, {{2}, "E"}, {{0, 2}, "D1p+E"}, {{1, 2}, "D2p+E"}},
      std::map<std::string, std::map<std::string, std::int64_t>>{},
      std::vector<MonomialPullback>{{"segment", {{1, 0, 1}, {0, 1, 1}}}});
}

// P^1 x disc with one extra component E of multiplicity b where z vanishes to order e.
inline ModelPtr p1_model(const std::string& name, std::int64_t b, std::int64_t e) {
  return std::make_shared<const SncModel>(
      name, std::vector<Component>{{"D0", 1}, {"E", b}},
      std::vector<Stratum>{{{0}, "D0"}, {{1}, "E"}, {{0, 1}, "D0+E"}},
      std::map<std::string, std::map<std::string, std::int64_t>>{{"z", {{"E", e}}}});
}

inline std::string data_path(const std::string& rel) { return std::string(BERKHYB_DATA_DIR) + "/" + rel; }

}  // namespace testing_util
