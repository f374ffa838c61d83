#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spinflow {

// %.17g formatting used for every float we serialize (round-trips exactly).
std::string format_g17(double x);

// Minimal JSON emitter with deterministic key order and g17 doubles; nlohmann
// is used for *reading* config files, this writer controls the output format.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(const std::string& s);
  JsonWriter& value(const char* s);
  JsonWriter& value(double x);
  JsonWriter& value(int x);
  JsonWriter& value(long long x);
  JsonWriter& value(bool b);

  std::string str() const { return out_; }

 private:
  void comma();
  std::string out_;
  std::vector<bool> first_in_scope_;
  bool pending_key_ = false;
};

std::string json_escape(const std::string& s);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace spinflow
