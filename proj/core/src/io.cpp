#include "minrate/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace minrate {

using nlohmann::json;

namespace {

Rational rational_field(const json& value, const std::string& what) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(what + ": " + e.what());
  }
  throw FormatError(what + ": expected a rational string or an integer");
}

const json& member(const json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return object.at(key);
}

std::vector<Rational> rational_list(const json& value, const std::string& what) {
  if (!value.is_array()) throw FormatError(what + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < value.size(); ++i) out.push_back(rational_field(value[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

json rational_list_json(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

int int_field(const json& value, const std::string& what) {
  if (!value.is_number_integer()) throw FormatError(what + ": expected an integer");
  return value.get<int>();
}

}  // namespace

Instance parse_instance(const std::string& text) {
  const json doc = parse_json(text);
  Instance instance;
  auto speeds = rational_list(member(doc, "speeds"), "speeds");
  auto powers = rational_list(member(doc, "powers"), "powers");
  if (speeds.size() != powers.size()) throw FormatError("speeds and powers differ in length");
  instance.profile = SpeedProfile(std::move(speeds), std::move(powers));
  const json& jobs = member(doc, "jobs");
  if (!jobs.is_array()) throw FormatError("jobs: expected an array");
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::string where = "jobs[" + std::to_string(i) + "]";
    const json& j = jobs[i];
    instance.jobs.push_back({int_field(member(j, "id"), where + ".id"), rational_field(member(j, "release"), where + ".release"),
                             rational_field(member(j, "deadline"), where + ".deadline"),
                             rational_field(member(j, "work"), where + ".work")});
  }
  return instance;
}

std::string dump_instance(const Instance& instance) {
  json doc;
  doc["speeds"] = rational_list_json(instance.profile.speeds());
  doc["powers"] = rational_list_json(instance.profile.powers());
  doc["jobs"] = json::array();
  for (const auto& job : instance.jobs)
    doc["jobs"].push_back({{"id", job.id},
                           {"release", to_string(job.release)},
                           {"deadline", to_string(job.deadline)},
                           {"work", to_string(job.work)}});
  return doc.dump(2) + "\n";
}

ScheduleFile parse_schedule(const std::string& text) {
  const json doc = parse_json(text);
  ScheduleFile out;
  const json& segments = member(doc, "segments");
  if (!segments.is_array()) throw FormatError("segments: expected an array");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string where = "segments[" + std::to_string(i) + "]";
    const json& s = segments[i];
    Segment seg;
    seg.start = rational_field(member(s, "start"), where + ".start");
    seg.end = rational_field(member(s, "end"), where + ".end");
    const json& job = member(s, "job");
    if (!job.is_null()) seg.job = int_field(job, where + ".job");
    const int index = int_field(member(s, "speed_index"), where + ".speed_index");
    if (index < 0) throw FormatError(where + ".speed_index: negative");
    seg.speed_index = static_cast<std::size_t>(index);
    if (seg.end <= seg.start) throw FormatError(where + ": empty or reversed segment");
    if (!out.schedule.segments.empty() && out.schedule.segments.back().end > seg.start)
      throw FormatError(where + ": overlaps the previous segment");
    out.schedule.segments.push_back(seg);
  }
  if (doc.contains("recharge_rate") && !doc.at("recharge_rate").is_null())
    out.rate = rational_field(doc.at("recharge_rate"), "recharge_rate");
  return out;
}

std::string dump_schedule(const Schedule& schedule, const std::optional<Rational>& rate) {
  json doc;
  doc["segments"] = json::array();
  for (const auto& seg : schedule.segments) {
    doc["segments"].push_back({{"start", to_string(seg.start)},
                               {"end", to_string(seg.end)},
                               {"job", seg.job ? json(*seg.job) : json(nullptr)},
                               {"speed_index", seg.speed_index}});
  }
  doc["recharge_rate"] = rate ? json(to_string(*rate)) : json(nullptr);
  return doc.dump(2) + "\n";
}

CertificateFile parse_certificate(const std::string& text) {
  const json doc = parse_json(text);
  CertificateFile out;
  auto& cert = out.certificate;
  cert.points = rational_list(member(doc, "points"), "points");
  cert.beta = rational_list(member(doc, "beta"), "beta");
  for (const auto& a : member(doc, "jumps")) cert.jumps.push_back(int_field(a, "jumps"));
  for (const auto& a : member(doc, "alpha")) cert.alpha[int_field(member(a, "job"), "alpha.job")] = rational_field(member(a, "value"), "alpha.value");
  for (const auto& s : member(doc, "slots")) {
    cert.slots.push_back({rational_field(member(s, "start"), "slots.start"), rational_field(member(s, "end"), "slots.end"),
                          rational_field(member(s, "gamma"), "slots.gamma")});
  }
  cert.objective = rational_field(member(doc, "objective"), "objective");
  if (doc.contains("depletion_points")) out.structure.points = rational_list(doc.at("depletion_points"), "depletion_points");
  if (doc.contains("levels")) {
    for (const auto& e : doc.at("levels"))
      out.levels.set(int_field(member(e, "job"), "levels.job"),
                     static_cast<std::size_t>(int_field(member(e, "interval"), "levels.interval") - 1),
                     int_field(member(e, "level"), "levels.level"));
  }
  return out;
}

std::string dump_certificate(const DualCertificate& certificate, const DepletionStructure& structure,
                             const SpeedLevelTable& levels) {
  json doc;
  doc["points"] = rational_list_json(certificate.points);
  doc["beta"] = rational_list_json(certificate.beta);
  doc["jumps"] = certificate.jumps;
  doc["alpha"] = json::array();
  for (const auto& [job, a] : certificate.alpha) doc["alpha"].push_back({{"job", job}, {"value", to_string(a)}});
  doc["slots"] = json::array();
  for (const auto& s : certificate.slots)
    doc["slots"].push_back({{"start", to_string(s.start)}, {"end", to_string(s.end)}, {"gamma", to_string(s.gamma)}});
  doc["objective"] = to_string(certificate.objective);
  doc["depletion_points"] = rational_list_json(structure.points);
  doc["levels"] = json::array();
  for (const auto& [key, level] : levels.entries())
    doc["levels"].push_back({{"job", key.first}, {"interval", key.second + 1}, {"level", level}});
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw FormatError("cannot write " + path);
}

}  // namespace minrate
