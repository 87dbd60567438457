// Copyright 2026 The digail Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIGAIL_INI_HPP_
#define DIGAIL_INI_HPP_

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace digail {

// Flat [section] / key = value files. '#' and ';' start comments; blank
// lines are skipped; keys must appear inside a section.
struct IniEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

namespace detail {

inline std::string ini_trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline std::vector<IniEntry> parse_ini_text(const std::string& text,
                                            const std::string& name) {
  std::vector<IniEntry> entries;
  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find_first_of("#;");
    std::string line = detail::ini_trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(name + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
      section = detail::ini_trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::runtime_error(name + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
    if (section.empty())
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": key outside of any [section]");
    IniEntry e;
    e.section = section;
    e.key = detail::ini_trim(line.substr(0, eq));
    e.value = detail::ini_trim(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty())
      throw std::runtime_error(name + ":" + std::to_string(lineno) + ": empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

inline std::vector<IniEntry> parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ini_text(buf.str(), path);
}

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

}  // namespace digail

#endif  // DIGAIL_INI_HPP_
