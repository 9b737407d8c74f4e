#pragma once

#include "marlo/core/types.hpp"

#include <json.hpp>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace marlo {

/// Schema violation while reading structured text; carries the offending field path.
class FieldError : public std::runtime_error {
 public:
  FieldError(std::string field, const std::string& what)
      : std::runtime_error("field '" + field + "': " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

namespace json_util {

using nlohmann::json;

inline json cell(Cell c) { return json::array({c.x, c.y}); }

const json& require(const json& obj, std::string_view key, std::string_view context = {});
void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view context = {});

std::int64_t get_int(const json& obj, std::string_view key, std::string_view context = {});
std::uint64_t get_u64(const json& obj, std::string_view key, std::string_view context = {});
double get_number(const json& obj, std::string_view key, std::string_view context = {});
bool get_bool(const json& obj, std::string_view key, std::string_view context = {});
std::string get_string(const json& obj, std::string_view key, std::string_view context = {});
Cell get_cell(const json& value, std::string_view field);

std::string path(std::string_view context, std::string_view key);

}  // namespace json_util
}  // namespace marlo
