#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace qdlab {

// Minimal ordered JSON emitter. Keys appear exactly in insertion order and
// every floating value is printed with 17 significant digits, so identical
// inputs produce byte-identical artifacts.
class JsonWriter {
 public:
  void begin_object() {
    sep();
    out_ += '{';
    stack_.push_back(true);
  }
  void end_object() {
    out_ += '}';
    stack_.pop_back();
  }
  void begin_array() {
    sep();
    out_ += '[';
    stack_.push_back(true);
  }
  void end_array() {
    out_ += ']';
    stack_.pop_back();
  }
  void key(const std::string& k) {
    sep();
    append_string(k);
    out_ += ':';
    pending_value_ = true;
  }
  void value(double x) {
    sep();
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out_ += buf;
  }
  void value(long long x) {
    sep();
    out_ += std::to_string(x);
  }
  void value(long x) { value(static_cast<long long>(x)); }
  void value(int x) { value(static_cast<long long>(x)); }
  void value(bool b) {
    sep();
    out_ += b ? "true" : "false";
  }
  void value(const std::string& s) {
    sep();
    append_string(s);
  }
  void value(const char* s) { value(std::string(s)); }

  const std::string& str() const { return out_; }

 private:
  void sep() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!stack_.empty()) {
      if (!stack_.back()) out_ += ',';
      stack_.back() = false;
    }
  }
  void append_string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> stack_;
  bool pending_value_ = false;
};

}  // namespace qdlab
