// Deterministic CSV emission: fixed float formatting so identical runs
// produce identical bytes.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcmwalk {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string());
    }

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& names) {
        for (size_t i = 0; i < names.size(); ++i) {
            if (i) out_ << ",";
            out_ << names[i];
        }
        out_ << "\n";
    }

    class Row {
      public:
        explicit Row(std::ofstream& out) : out_(out) {}
        ~Row() { out_ << "\n"; }
        Row& add(double v) { return raw(format_double(v)); }
        Row& add(int v) { return raw(std::to_string(v)); }
        Row& add(const std::string& v) { return raw(v); }

      private:
        Row& raw(const std::string& s) {
            if (!first_) out_ << ",";
            first_ = false;
            out_ << s;
            return *this;
        }
        std::ofstream& out_;
        bool first_ = true;
    };

    Row row() { return Row(out_); }

  private:
    std::ofstream out_;
};

}  // namespace dcmwalk
