#include "spinflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace spinflow {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void JsonWriter::comma() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_in_scope_.empty()) {
    if (!first_in_scope_.back()) out_ += ',';
    first_in_scope_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += '{';
  first_in_scope_.push_back(true);
  return *this;
}
JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  first_in_scope_.pop_back();
  return *this;
}
JsonWriter& JsonWriter::begin_array() {
  comma();
  out_ += '[';
  first_in_scope_.push_back(true);
  return *this;
}
JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  first_in_scope_.pop_back();
  return *this;
}
JsonWriter& JsonWriter::key(const std::string& k) {
  comma();
  out_ += '"' + json_escape(k) + "\":";
  pending_key_ = true;
  return *this;
}
JsonWriter& JsonWriter::value(const std::string& s) {
  comma();
  out_ += '"' + json_escape(s) + '"';
  return *this;
}
JsonWriter& JsonWriter::value(const char* s) { return value(std::string(s)); }
JsonWriter& JsonWriter::value(double x) {
  comma();
  out_ += format_g17(x);
  return *this;
}
JsonWriter& JsonWriter::value(int x) {
  comma();
  out_ += std::to_string(x);
  return *this;
}
JsonWriter& JsonWriter::value(long long x) {
  comma();
  out_ += std::to_string(x);
  return *this;
}
JsonWriter& JsonWriter::value(bool b) {
  comma();
  out_ += b ? "true" : "false";
  return *this;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

}  // namespace spinflow
