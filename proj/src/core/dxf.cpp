// Copyright 2026 The WallForge Authors
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

#include <charconv>
#include <string>
#include <utility>
#include <vector>

#include "wallforge/error.hpp"
#include "wallforge/plan.hpp"

namespace wallforge::plan {

namespace {

struct GroupPair {
  int code = 0;
  std::string_view value;
  std::size_t line = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<GroupPair> tokenize(std::string_view bytes) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) nl = bytes.size();
    lines.push_back(trim(bytes.substr(pos, nl - pos)));
    pos = nl + 1;
  }
  // A trailing newline leaves no extra line; a final blank value line is legal.
  if (lines.size() % 2 != 0) {
    if (!lines.empty() && lines.back().empty()) {
      lines.pop_back();
    } else {
      fail(ErrorCode::MalformedDxf, "odd number of lines: group code without value");
    }
  }

  std::vector<GroupPair> pairs;
  pairs.reserve(lines.size() / 2);
  for (std::size_t i = 0; i < lines.size(); i += 2) {
    const std::string_view code_text = lines[i];
    int code = 0;
    auto [ptr, ec] = std::from_chars(code_text.data(), code_text.data() + code_text.size(), code);
    if (ec != std::errc{} || ptr != code_text.data() + code_text.size()) {
      fail(ErrorCode::MalformedDxf,
           "line " + std::to_string(i + 1) + ": expected integer group code, got '" +
               std::string(code_text) + "'");
    }
    pairs.push_back({code, lines[i + 1], i + 1});
  }
  return pairs;
}

double to_double(const GroupPair& g) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(g.value.data(), g.value.data() + g.value.size(), v);
  if (ec != std::errc{} || ptr != g.value.data() + g.value.size()) {
    fail(ErrorCode::MalformedDxf, "line " + std::to_string(g.line + 1) + ": bad number '" +
                                      std::string(g.value) + "'");
  }
  return v;
}

int to_int(const GroupPair& g) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(g.value.data(), g.value.data() + g.value.size(), v);
  if (ec != std::errc{} || ptr != g.value.data() + g.value.size()) {
    fail(ErrorCode::MalformedDxf, "line " + std::to_string(g.line + 1) + ": bad integer '" +
                                      std::string(g.value) + "'");
  }
  return v;
}

bool version_supported(std::string_view v) {
  // AC1009 is R12; everything numerically later is accepted.
  if (v.size() != 6 || v.substr(0, 2) != "AC") return false;
  int n = 0;
  auto [ptr, ec] = std::from_chars(v.data() + 2, v.data() + 6, n);
  return ec == std::errc{} && n >= 1009;
}

class Parser {
 public:
  explicit Parser(std::vector<GroupPair> pairs) : pairs_(std::move(pairs)) {}

  DxfDocument run() {
    bool saw_eof = false;
    while (pos_ < pairs_.size()) {
      const GroupPair& g = next();
      if (g.code != 0) fail_at(g, "expected group 0 at top level");
      if (g.value == "EOF") {
        saw_eof = true;
        break;
      }
      if (g.value != "SECTION") fail_at(g, "expected SECTION, got '" + std::string(g.value) + "'");
      const GroupPair& name = next();
      if (name.code != 2) fail_at(name, "SECTION without name");
      if (name.value == "HEADER") {
        header();
      } else if (name.value == "TABLES") {
        tables();
      } else if (name.value == "ENTITIES") {
        entities();
      } else {
        skip_section();
      }
    }
    if (!saw_eof) fail(ErrorCode::MalformedDxf, "missing EOF marker (truncated file?)");
    return std::move(doc_);
  }

 private:
  const GroupPair& next() {
    if (pos_ >= pairs_.size()) fail(ErrorCode::MalformedDxf, "unexpected end of file");
    return pairs_[pos_++];
  }
  const GroupPair* peek() const { return pos_ < pairs_.size() ? &pairs_[pos_] : nullptr; }

  [[noreturn]] static void fail_at(const GroupPair& g, const std::string& what) {
    fail(ErrorCode::MalformedDxf, "line " + std::to_string(g.line) + ": " + what);
  }

  void skip_section() {
    while (true) {
      const GroupPair& g = next();
      if (g.code == 0 && g.value == "ENDSEC") return;
      if (g.code == 0 && g.value == "EOF") fail_at(g, "EOF inside section");
    }
  }

  void header() {
    while (true) {
      const GroupPair& g = next();
      if (g.code == 0 && g.value == "ENDSEC") return;
      if (g.code == 0 && g.value == "EOF") fail_at(g, "EOF inside HEADER");
      if (g.code == 9 && g.value == "$ACADVER") {
        const GroupPair& v = next();
        doc_.version = std::string(v.value);
        if (!version_supported(doc_.version)) {
          fail(ErrorCode::UnsupportedVersion, "DXF version " + doc_.version + " predates R12");
        }
      }
    }
  }

  void tables() {
    bool in_layer_table = false;
    while (true) {
      const GroupPair& g = next();
      if (g.code == 0 && g.value == "ENDSEC") return;
      if (g.code == 0 && g.value == "EOF") fail_at(g, "EOF inside TABLES");
      if (g.code == 0 && g.value == "TABLE") {
        const GroupPair& name = next();
        in_layer_table = name.code == 2 && name.value == "LAYER";
      } else if (g.code == 0 && g.value == "ENDTAB") {
        in_layer_table = false;
      } else if (in_layer_table && g.code == 0 && g.value == "LAYER") {
        while (const GroupPair* p = peek()) {
          if (p->code == 0) break;
          const GroupPair& field = next();
          if (field.code == 2) doc_.layers.emplace_back(field.value);
        }
      }
    }
  }

  void entities() {
    const GroupPair* head = &next();
    while (true) {
      if (head->code != 0) fail_at(*head, "expected entity start");
      if (head->value == "ENDSEC") return;
      if (head->value == "EOF") fail_at(*head, "EOF inside ENTITIES");
      const std::string type(head->value);

      std::vector<const GroupPair*> fields;
      while (true) {
        const GroupPair& g = next();
        if (g.code == 0) {
          head = &g;
          break;
        }
        fields.push_back(&g);
      }

      if (type == "LINE") {
        doc_.entities.push_back(line(fields));
      } else if (type == "LWPOLYLINE") {
        doc_.entities.push_back(lwpolyline(fields));
      } else {
        ++doc_.skipped[type];
      }
    }
  }

  std::string synth_handle() const { return "#" + std::to_string(doc_.entities.size()); }

  DxfEntity line(const std::vector<const GroupPair*>& fields) {
    DxfEntity e;
    e.kind = DxfEntityKind::Line;
    std::optional<double> x0, y0, x1, y1;
    for (const GroupPair* g : fields) {
      switch (g->code) {
        case 5: e.handle = std::string(g->value); break;
        case 8: e.layer = std::string(g->value); break;
        case 10: x0 = to_double(*g); break;
        case 20: y0 = to_double(*g); break;
        case 11: x1 = to_double(*g); break;
        case 21: y1 = to_double(*g); break;
        default: break;
      }
    }
    if (!x0 || !y0 || !x1 || !y1) {
      fail(ErrorCode::MalformedDxf, "LINE missing endpoint coordinates");
    }
    if (e.handle.empty()) e.handle = synth_handle();
    e.vertices = {{*x0, *y0}, {*x1, *y1}};
    return e;
  }

  DxfEntity lwpolyline(const std::vector<const GroupPair*>& fields) {
    DxfEntity e;
    e.kind = DxfEntityKind::LwPolyline;
    std::optional<int> declared;
    bool pending_x = false;
    for (const GroupPair* g : fields) {
      switch (g->code) {
        case 5: e.handle = std::string(g->value); break;
        case 8: e.layer = std::string(g->value); break;
        case 70: e.closed = (to_int(*g) & 1) != 0; break;
        case 90: declared = to_int(*g); break;
        case 10:
          if (pending_x) fail_at(*g, "LWPOLYLINE vertex without y");
          e.vertices.push_back({to_double(*g), 0.0});
          pending_x = true;
          break;
        case 20:
          if (!pending_x) fail_at(*g, "LWPOLYLINE y without x");
          e.vertices.back().y = to_double(*g);
          pending_x = false;
          break;
        default: break;
      }
    }
    if (pending_x) fail(ErrorCode::MalformedDxf, "LWPOLYLINE vertex without y");
    if (declared && *declared != static_cast<int>(e.vertices.size())) {
      fail(ErrorCode::MalformedDxf, "LWPOLYLINE vertex count mismatch");
    }
    if (e.handle.empty()) e.handle = synth_handle();
    return e;
  }

  std::vector<GroupPair> pairs_;
  std::size_t pos_ = 0;
  DxfDocument doc_;
};

std::string number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

DxfDocument parse_dxf(std::string_view bytes) {
  constexpr std::string_view kBinarySentinel = "AutoCAD Binary DXF";
  if (bytes.substr(0, kBinarySentinel.size()) == kBinarySentinel) {
    fail(ErrorCode::UnsupportedVersion, "binary DXF is not supported");
  }
  return Parser(tokenize(bytes)).run();
}

std::string write_dxf(const DxfDocument& doc) {
  std::string out;
  auto pair = [&out](int code, std::string_view value) {
    out += std::to_string(code);
    out += '\n';
    out += value;
    out += '\n';
  };

  pair(0, "SECTION");
  pair(2, "HEADER");
  pair(9, "$ACADVER");
  pair(1, doc.version.empty() ? "AC1015" : doc.version);
  pair(0, "ENDSEC");

  pair(0, "SECTION");
  pair(2, "TABLES");
  pair(0, "TABLE");
  pair(2, "LAYER");
  pair(70, std::to_string(doc.layers.size()));
  for (const auto& name : doc.layers) {
    pair(0, "LAYER");
    pair(2, name);
    pair(70, "0");
  }
  pair(0, "ENDTAB");
  pair(0, "ENDSEC");

  pair(0, "SECTION");
  pair(2, "ENTITIES");
  for (const auto& e : doc.entities) {
    if (e.kind == DxfEntityKind::Line) {
      pair(0, "LINE");
      pair(5, e.handle);
      pair(8, e.layer);
      pair(10, number(e.vertices.at(0).x));
      pair(20, number(e.vertices.at(0).y));
      pair(11, number(e.vertices.at(1).x));
      pair(21, number(e.vertices.at(1).y));
    } else {
      pair(0, "LWPOLYLINE");
      pair(5, e.handle);
      pair(8, e.layer);
      pair(90, std::to_string(e.vertices.size()));
      pair(70, e.closed ? "1" : "0");
      for (const auto& v : e.vertices) {
        pair(10, number(v.x));
        pair(20, number(v.y));
      }
    }
  }
  pair(0, "ENDSEC");
  pair(0, "EOF");
  return out;
}

}  // namespace wallforge::plan
