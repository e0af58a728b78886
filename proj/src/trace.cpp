#include "trace.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace dlpkit::trace {

using nlohmann::json;

Step& Trace::add(Step s) {
  s.seq = static_cast<std::int64_t>(steps.size());
  steps.push_back(std::move(s));
  return steps.back();
}

std::string Trace::to_jsonl() const {
  std::ostringstream out;
  for (const Step& s : steps) {
    json j;
    j["seq"] = s.seq;
    if (s.vec)
      j["vector"] = *s.vec;
    else
      j["model"] = s.id;
    j["verdict"] = s.verdict;
    j["source"] = s.source == Source::Tested ? "tested" : "inferred";
    if (s.forced_by) j["forced_by"] = *s.forced_by;
    if (s.chain_index) j["chain_index"] = *s.chain_index;
    if (s.level) j["level"] = *s.level;
    if (s.score) j["score"] = *s.score;
    if (s.segment) j["segment"] = *s.segment;
    if (s.parent) j["parent"] = *s.parent;
    if (s.chain) j["chain"] = true;
    if (s.note) j["note"] = *s.note;
    out << j.dump() << '\n';
  }
  return out.str();
}

Trace Trace::from_jsonl(const std::string& text) {
  Trace t;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    require(!j.is_discarded() && j.is_object(), Errc::parse,
            "trace line " + std::to_string(lineno) + " is not a JSON object");
    Step s;
    s.seq = j.value("seq", static_cast<std::int64_t>(t.steps.size()));
    if (j.contains("vector")) {
      s.vec = j["vector"].get<std::string>();
      s.id = *s.vec;
    } else if (j.contains("model")) {
      s.id = j["model"].get<std::string>();
    } else {
      fail(Errc::parse, "trace line " + std::to_string(lineno) + " lacks vector/model");
    }
    require(j.contains("verdict"), Errc::parse,
            "trace line " + std::to_string(lineno) + " lacks verdict");
    s.verdict = j["verdict"].get<int>();
    require(s.verdict == 0 || s.verdict == 1, Errc::parse,
            "trace verdict must be 0/1 on line " + std::to_string(lineno));
    std::string src = j.value("source", "tested");
    require(src == "tested" || src == "inferred", Errc::parse,
            "trace source must be tested/inferred on line " + std::to_string(lineno));
    s.source = src == "tested" ? Source::Tested : Source::Inferred;
    if (j.contains("forced_by")) s.forced_by = j["forced_by"].get<std::int64_t>();
    if (j.contains("chain_index")) s.chain_index = j["chain_index"].get<int>();
    if (j.contains("level")) s.level = j["level"].get<double>();
    if (j.contains("score")) s.score = j["score"].get<double>();
    if (j.contains("segment")) s.segment = j["segment"].get<int>();
    if (j.contains("parent")) s.parent = j["parent"].get<std::int64_t>();
    s.chain = j.value("chain", false);
    if (j.contains("note")) s.note = j["note"].get<std::string>();
    t.steps.push_back(std::move(s));
  }
  return t;
}

void Trace::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io, "cannot open trace file for writing: " + path);
  out << to_jsonl();
  require(out.good(), Errc::io, "failed writing trace file: " + path);
}

Trace Trace::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io, "cannot open trace file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_jsonl(buf.str());
}

}  // namespace dlpkit::trace
