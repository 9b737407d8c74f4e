#include "marlo/core/json_util.hpp"

#include <algorithm>

namespace marlo::json_util {

std::string path(std::string_view context, std::string_view key) {
  if (context.empty()) return std::string(key);
  return std::string(context) + "." + std::string(key);
}

const json& require(const json& obj, std::string_view key, std::string_view context) {
  if (!obj.is_object()) throw FieldError(std::string(context.empty() ? "<root>" : context), "expected an object");
  auto it = obj.find(std::string(key));
  if (it == obj.end()) throw FieldError(path(context, key), "missing");
  return *it;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view context) {
  if (!obj.is_object()) throw FieldError(std::string(context.empty() ? "<root>" : context), "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw FieldError(path(context, key), "unknown field");
  }
}

std::int64_t get_int(const json& obj, std::string_view key, std::string_view context) {
  const json& v = require(obj, key, context);
  if (!v.is_number_integer()) throw FieldError(path(context, key), "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t get_u64(const json& obj, std::string_view key, std::string_view context) {
  const json& v = require(obj, key, context);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw FieldError(path(context, key), "expected an unsigned integer");
}

double get_number(const json& obj, std::string_view key, std::string_view context) {
  const json& v = require(obj, key, context);
  if (!v.is_number()) throw FieldError(path(context, key), "expected a number");
  return v.get<double>();
}

bool get_bool(const json& obj, std::string_view key, std::string_view context) {
  const json& v = require(obj, key, context);
  if (!v.is_boolean()) throw FieldError(path(context, key), "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, std::string_view key, std::string_view context) {
  const json& v = require(obj, key, context);
  if (!v.is_string()) throw FieldError(path(context, key), "expected a string");
  return v.get<std::string>();
}

Cell get_cell(const json& value, std::string_view field) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() || !value[1].is_number_integer())
    throw FieldError(std::string(field), "expected [x, y]");
  return {value[0].get<int>(), value[1].get<int>()};
}

}  // namespace marlo::json_util
