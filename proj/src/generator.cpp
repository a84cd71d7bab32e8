#include "rulegraph/generator.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

using Json = nlohmann::ordered_json;

Json make_event(const std::string& actor, const std::string& op, const std::string& instance, const std::string& asn) {
  Json e;
  e["actor"]["id"] = actor;
  e["api"]["operation"] = op;
  e["api"]["request.data"]["instanceID"] = instance;
  e["api"]["request.data"]["asnDesc"] = asn;
  return e;
}

std::string line(Json e, const char* label = nullptr) {
  if (label) e["_label"] = label;
  return e.dump();
}

// Uniform index in [0, n) from the generator, independent of the standard
// library's distribution implementation.
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::string random_suffix(std::mt19937_64& rng, std::size_t len) {
  static constexpr char kUpper[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(kUpper[pick(rng, 26)]);
  return s;
}

Corpus motivating() {
  const std::vector<std::string> ids = {
      "AttrService-InstanceRole-BTDN",  // ID1
      "AttrService-DataRole-QRIU",      // ID2
      "ModelService-DataRole-AUIB",     // ID3
      "ModelService-InstanceRole-ZXWI"  // ID4
  };
  const std::vector<std::vector<std::string>> ops = {
      {"CreateInstance", "DeleteInstance", "GetInstanceStatus"},
      {"StartInstance", "StopInstance", "GetInstanceStatus"},
      {"StartInstance", "StopInstance", "GetInstanceStatus"},
      {"CreateInstance", "DeleteInstance", "GetInstanceStatus"},
  };
  Corpus c;
  c.types = preset_types();
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (const auto& op : ops[i]) c.train.push_back(line(make_event(ids[i], op, "i-12345", "AMAZON-AES")));
  for (const auto& l : c.train) c.test.push_back(line(Json::parse(l), "normal"));
  // Every actor attempting the other group's exclusive operations.
  const std::vector<std::string> inst_ops = {"CreateInstance", "DeleteInstance"};
  const std::vector<std::string> data_ops = {"StartInstance", "StopInstance"};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& forbidden = (i == 0 || i == 3) ? data_ops : inst_ops;
    for (const auto& op : forbidden) c.test.push_back(line(make_event(ids[i], op, "i-12345", "AMAZON-AES"), "anomaly"));
  }
  Json odd = make_event(ids[0], "GetInstanceStatus", "i-12345", "AMAZON-AES");
  odd["api"]["request.data"]["region"] = "eu-west-1";
  c.test.push_back(line(odd, "anomaly"));
  return c;
}

std::vector<Archetype> default_archetypes() {
  return {
      {"Instance", {"Attr", "Model", "Search", "Index"}, {"CreateInstance", "DeleteInstance", "RebootInstance"}, 12},
      {"Data", {"Attr", "Model", "Query", "Stream"}, {"StartInstance", "StopInstance", "SnapshotVolume"}, 12},
      {"Billing", {"Invoice", "Ledger", "Payment", "Quote"}, {"GetInvoice", "ListCharges", "ExportReport"}, 12},
      {"Network", {"Edge", "Route", "Gateway", "Proxy"}, {"AttachInterface", "DetachInterface", "UpdateRoutes"}, 12},
      {"Audit", {"Trail", "Config", "Policy", "Review"}, {"ReadLogs", "ExportTrail", "ListFindings"}, 12},
  };
}

constexpr const char* kBenchRoles[] = {"Instance", "Data", "Billing", "Network", "Audit",
                                       "Deploy", "Backup", "Search", "Queue", "Cache"};
constexpr const char* kBenchOps[] = {"Create", "Delete", "Describe", "Update", "List"};

std::vector<Archetype> bench_archetypes() {
  std::vector<Archetype> out;
  for (const char* role : kBenchRoles) {
    Archetype a{role, {"Alpha", "Bravo", "Charlie", "Delta"}, {}, 12};
    for (const char* op : kBenchOps) a.operations.push_back(std::string(op) + role);
    out.push_back(std::move(a));
  }
  return out;
}

struct Actor {
  std::string id;
  std::size_t archetype;
};

}  // namespace

TypeConfig preset_types() {
  TypeConfig t;
  t.assign("actor.id", "Role")
      .assign("api.operation", "EventName")
      .assign("api.request.data.instanceID", "Instance")
      .assign("api.request.data.asnDesc", "ASN")
      .exclude("meta.*")
      .categorical("EventName");
  return t;
}

GeneratorSpec GeneratorSpec::preset_defaults(const std::string& preset) {
  GeneratorSpec s;
  s.preset = preset;
  if (preset == "motivating") {
    s.train_events = 12;
    s.test_events = 21;
  } else if (preset == "synthetic" || preset == "bench") {
    s.archetypes = default_archetypes();
    s.shared_operations = {"DescribeStatus"};
    s.asns = {"AMAZON-AES", "AMAZON-02"};
    if (preset == "bench") {
      s.archetypes = bench_archetypes();
      s.shared_operations.clear();
      s.padding = 900;
      s.train_events = 0;
      s.test_events = 20000;
    }
  } else {
    throw ValidationError("unknown preset '" + preset + "'");
  }
  return s;
}

GeneratorSpec GeneratorSpec::from_json(const nlohmann::ordered_json& j) {
  GeneratorSpec s = preset_defaults(j.value("preset", std::string("synthetic")));
  s.seed = j.value("seed", s.seed);
  s.train_events = j.value("train_events", s.train_events);
  s.test_events = j.value("test_events", s.test_events);
  s.anomaly_rate = j.value("anomaly_rate", s.anomaly_rate);
  s.resources = j.value("resources", s.resources);
  s.suffix_length = j.value("suffix_length", s.suffix_length);
  s.padding = j.value("padding", s.padding);
  if (j.contains("asns")) s.asns = j.at("asns").get<std::vector<std::string>>();
  if (j.contains("shared_operations")) s.shared_operations = j.at("shared_operations").get<std::vector<std::string>>();
  if (j.contains("archetypes")) {
    s.archetypes.clear();
    for (const auto& a : j.at("archetypes"))
      s.archetypes.push_back({a.at("role").get<std::string>(), a.at("services").get<std::vector<std::string>>(),
                              a.at("operations").get<std::vector<std::string>>(), a.value("actors", std::size_t{12})});
  }
  return s;
}

void GeneratorSpec::validate() const {
  if (preset == "motivating") return;
  if (archetypes.size() < 2) throw ValidationError("generator needs at least two archetypes");
  if (!(anomaly_rate >= 0.0 && anomaly_rate <= 1.0)) throw ValidationError("anomaly_rate must lie in [0, 1]");
  if (resources == 0 || asns.empty()) throw ValidationError("resource and ASN pools must be non-empty");
  if (suffix_length == 0) throw ValidationError("suffix_length must be positive");
  std::set<std::string> ops(shared_operations.begin(), shared_operations.end());
  for (const auto& a : archetypes) {
    if (a.role.empty() || a.services.empty() || a.operations.empty() || a.actors == 0)
      throw ValidationError("archetype '" + a.role + "' is incomplete");
    for (const auto& op : a.operations)
      if (!ops.insert(op).second)
        throw ValidationError("operation '" + op + "' is not exclusive to one archetype; anomalies would be mislabeled");
  }
}

Corpus generate(const GeneratorSpec& spec) {
  spec.validate();
  if (spec.preset == "motivating") return motivating();

  std::mt19937_64 rng(spec.seed);
  Corpus c;
  c.types = preset_types();

  std::vector<Actor> actors;
  std::set<std::string> taken;
  for (std::size_t a = 0; a < spec.archetypes.size(); ++a) {
    const auto& arch = spec.archetypes[a];
    for (std::size_t k = 0; k < arch.actors; ++k) {
      std::string id;
      do {
        id = arch.services[pick(rng, arch.services.size())] + "Service-" + arch.role + "Role-" +
             random_suffix(rng, spec.suffix_length);
      } while (!taken.insert(id).second);
      actors.push_back({id, a});
    }
  }
  std::vector<std::string> instances;
  for (std::size_t r = 0; r < spec.resources; ++r) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "i-%05zu", static_cast<std::size_t>(rng() % 100000));
    instances.emplace_back(buf);
  }
  std::string pad(spec.padding, 'x');

  auto normal = [&] {
    const Actor& who = actors[pick(rng, actors.size())];
    const auto& arch = spec.archetypes[who.archetype];
    const std::size_t nops = arch.operations.size() + spec.shared_operations.size();
    const std::size_t o = pick(rng, nops);
    const std::string& op = o < arch.operations.size() ? arch.operations[o] : spec.shared_operations[o - arch.operations.size()];
    Json e = make_event(who.id, op, instances[pick(rng, instances.size())], spec.asns[pick(rng, spec.asns.size())]);
    if (!pad.empty()) e["meta"]["padding"] = pad;
    return e;
  };

  for (std::size_t i = 0; i < spec.train_events; ++i) c.train.push_back(line(normal()));

  for (std::size_t i = 0; i < spec.test_events; ++i) {
    const bool anomalous = static_cast<double>(rng() >> 11) * 0x1.0p-53 < spec.anomaly_rate;
    if (!anomalous) {
      c.test.push_back(line(normal(), "normal"));
      continue;
    }
    Json e = normal();
    switch (pick(rng, 3)) {
      case 0: {  // an actor calling another archetype's exclusive operation
        const Actor& who = actors[pick(rng, actors.size())];
        std::size_t other = pick(rng, spec.archetypes.size() - 1);
        if (other >= who.archetype) ++other;
        const auto& ops = spec.archetypes[other].operations;
        e["actor"]["id"] = who.id;
        e["api"]["operation"] = ops[pick(rng, ops.size())];
        break;
      }
      case 1: {  // a field never seen in training
        e["api"]["request.data"]["region"] = "eu-west-" + std::to_string(1 + pick(rng, 3));
        break;
      }
      default: {  // a role outside every archetype
        e["actor"]["id"] = std::string("Shadow") + "Service-RootRole-" + random_suffix(rng, spec.suffix_length);
        break;
      }
    }
    c.test.push_back(line(e, "anomaly"));
  }
  return c;
}

Ruleset bench_ruleset() {
  std::vector<Rule> rules;
  const SlotKey actor{"actor.id", "Role"}, asn{"api.request.data.asnDesc", "ASN"},
      inst{"api.request.data.instanceID", "Instance"}, op{"api.operation", "EventName"};
  for (const char* role : kBenchRoles)
    for (const char* o : kBenchOps) {
      Rule r;
      r.support = 1;
      r.signature = {actor, asn, inst, op};
      r.patterns = {parse(std::string("[A-Za-z]{4,8}Service-") + role + "Role-[A-Z]{4,4}"),
                    parse("(?:AMAZON-02|AMAZON-AES)"), parse("i-[0-9]{5,5}"), Pattern::literal(std::string(o) + role)};
      rules.push_back(std::move(r));
    }
  return Ruleset(std::move(rules), preset_types());
}

}  // namespace rulegraph
