#include "cmlk/tables.hpp"

#include <json.hpp>

namespace cmlk::tables {

namespace detail {
extern const char* const kAppendixTablesJson;
}

namespace {

using nlohmann::json;

struct fixture {
  std::vector<form_row> forms;
  std::vector<exception_row> exceptions;
  std::vector<ep_row> ep;
  std::vector<dp_row> dp;
};

std::array<long long, 6> coeffs_of(const json& j) {
  std::array<long long, 6> c{};
  for (size_t i = 0; i < 6; ++i) c[i] = j.at(i).get<long long>();
  return c;
}

const fixture& data() {
  static const fixture fx = [] {
    fixture f;
    json root = json::parse(detail::kAppendixTablesJson);
    for (const auto& j : root.at("forms")) {
      form_row r;
      r.p = j.at("p").get<long long>();
      r.over_p2 = j.at("field").get<std::string>() == "p2";
      r.coeffs = coeffs_of(j.at("coeffs"));
      r.d0 = j.at("d0").get<double>();
      r.d1 = j.at("d1").get<double>();
      f.forms.push_back(r);
    }
    for (const auto& j : root.at("exceptions")) {
      exception_row r;
      r.p = j.at("p").get<long long>();
      r.coeffs = coeffs_of(j.at("coeffs"));
      r.n0 = j.at("n0").get<double>();
      r.n1 = j.value("n1", 0.0);
      r.complete = j.at("complete").get<bool>();
      if (j.contains("omitted"))
        r.omitted = j.at("omitted").get<std::vector<long long>>();
      if (j.contains("values"))
        r.values = j.at("values").get<std::vector<long long>>();
      r.count = j.value("count", static_cast<long long>(r.values.size()));
      r.max_value = j.value("max", r.values.empty() ? 0 : r.values.back());
      f.exceptions.push_back(std::move(r));
    }
    for (const auto& j : root.at("ep")) {
      ep_row r;
      r.p = j.at("p").get<long long>();
      r.count = j.at("count").get<long long>();
      r.max_value = j.at("max").get<long long>();
      if (j.contains("values"))
        r.values = j.at("values").get<std::vector<long long>>();
      f.ep.push_back(std::move(r));
    }
    for (const auto& j : root.at("dp")) {
      f.dp.push_back({j.at("p").get<long long>(), j.at("dp").get<double>()});
    }
    return f;
  }();
  return fx;
}

}  // namespace

const std::vector<form_row>& form_rows() { return data().forms; }
const std::vector<exception_row>& exception_rows() { return data().exceptions; }
const std::vector<ep_row>& ep_rows() { return data().ep; }
const std::vector<dp_row>& dp_rows() { return data().dp; }

std::vector<form_row> forms_for_prime(long long p) {
  std::vector<form_row> out;
  for (const auto& r : form_rows())
    if (r.p == p) out.push_back(r);
  return out;
}

const ep_row* ep_for_prime(long long p) {
  for (const auto& r : ep_rows())
    if (r.p == p) return &r;
  return nullptr;
}

const char* raw_json() { return detail::kAppendixTablesJson; }

}  // namespace cmlk::tables
