#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "locfade/cli.hpp"

namespace locfade::cli {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

std::vector<std::string> split_record(std::string_view line, std::size_t lineno) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          out.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quote", static_cast<int>(lineno), static_cast<int>(line.size()));
  return out;
}

double to_double(const std::string& s, std::size_t lineno) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError("bad number \"" + s + "\"", static_cast<int>(lineno), 1);
  }
  return v;
}

}  // namespace

std::string render_csv(const ExperimentResult& result) {
  std::string out = "x,series,y,ci95,trials\n";
  for (const auto& r : result.sorted_rows()) {
    out += num(r.x) + ',' + field(r.series) + ',' + num(r.y) + ',';
    if (r.ci95) out += num(*r.ci95) + ',' + std::to_string(r.trials);
    else out += ',';
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t pos = 0, lineno = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineno;
    if (lineno == 1) {
      if (line != "x,series,y,ci95,trials") throw ParseError("unexpected header", 1, 1);
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_record(line, lineno);
    if (f.size() != 5) throw ParseError("expected 5 fields", static_cast<int>(lineno), 1);
    ResultRow r;
    r.x = to_double(f[0], lineno);
    r.series = f[1];
    r.y = to_double(f[2], lineno);
    if (!f[3].empty()) {
      r.ci95 = to_double(f[3], lineno);
      r.trials = static_cast<std::size_t>(to_double(f[4], lineno));
    }
    rows.push_back(std::move(r));
  }
  if (lineno == 0) throw ParseError("missing header", 1, 1);
  return rows;
}

std::string render_meta(const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["experiment"] = result.experiment;
  j["seed"] = result.seed;
  j["config_hash"] = result.config_hash;
  j["x_label"] = result.x_label;
  j["y_label"] = result.y_label;
  auto notes = nlohmann::ordered_json::object();
  for (const auto& [k, v] : result.notes) notes[k] = v;
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  write_atomic(path, render_csv(result));
}

}  // namespace locfade::cli
