#pragma once
// Deterministic synthetic log generator. One scenario, order-to-delivery:
// customers place orders whose items are packed into packages and
// delivered; feature flags switch on dynamic attributes, N:M relations,
// carrier reassignment (schema evolution), an order subtype, simultaneous
// events, and orphan entities. Identical configs yield identical logs on
// every platform: the PRNG is SplitMix64 with one substream per entity
// kind, so enlarging one population never perturbs another.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "oclog/codec/common.hpp"
#include "oclog/formats.hpp"
#include "oclog/model.hpp"

namespace oclog {

struct GenConfig {
  std::uint64_t seed = 1;
  int n_customers = 2;
  int n_orders = 4;
  int items_per_order_min = 1;
  int items_per_order_max = 3;
  int n_packages = 2;
  bool dynamic_attrs = true;
  bool nm_relations = false;
  bool schema_evolution = false;
  bool inheritance = false;
  bool simultaneous_events = false;
  bool orphan_objects = false;
  bool orphan_events = false;

  bool operator==(const GenConfig&) const = default;
};

inline codec::Json gen_config_to_json(const GenConfig& c) {
  codec::Json j = codec::Json::object();
  j["seed"] = c.seed;
  j["n_customers"] = c.n_customers;
  j["n_orders"] = c.n_orders;
  j["items_per_order"] = codec::Json::array({c.items_per_order_min, c.items_per_order_max});
  j["n_packages"] = c.n_packages;
  j["dynamic_attrs"] = c.dynamic_attrs;
  j["nm_relations"] = c.nm_relations;
  j["schema_evolution"] = c.schema_evolution;
  j["inheritance"] = c.inheritance;
  j["simultaneous_events"] = c.simultaneous_events;
  j["orphan_objects"] = c.orphan_objects;
  j["orphan_events"] = c.orphan_events;
  return j;
}

inline GenConfig gen_config_from_json(const codec::Json& j) {
  GenConfig c;
  if (!j.is_object()) throw LookupError(LookupError::What::InvalidConfig, "not a JSON object");
  auto get_int = [&](const char* key, int& into) {
    if (const codec::Json* v = codec::get_if(j, key)) {
      if (!v->is_number_integer() && !v->is_number_unsigned())
        throw LookupError(LookupError::What::InvalidConfig, std::string(key) + " must be an integer");
      into = v->get<int>();
    }
  };
  auto get_flag = [&](const char* key, bool& into) {
    if (const codec::Json* v = codec::get_if(j, key)) {
      if (!v->is_boolean())
        throw LookupError(LookupError::What::InvalidConfig, std::string(key) + " must be a boolean");
      into = v->get<bool>();
    }
  };
  if (const codec::Json* v = codec::get_if(j, "seed"); v && v->is_number())
    c.seed = v->get<std::uint64_t>();
  get_int("n_customers", c.n_customers);
  get_int("n_orders", c.n_orders);
  if (const codec::Json* v = codec::get_if(j, "items_per_order")) {
    if (!v->is_array() || v->size() != 2)
      throw LookupError(LookupError::What::InvalidConfig, "items_per_order must be [min, max]");
    c.items_per_order_min = (*v)[0].get<int>();
    c.items_per_order_max = (*v)[1].get<int>();
  }
  get_int("n_packages", c.n_packages);
  get_flag("dynamic_attrs", c.dynamic_attrs);
  get_flag("nm_relations", c.nm_relations);
  get_flag("schema_evolution", c.schema_evolution);
  get_flag("inheritance", c.inheritance);
  get_flag("simultaneous_events", c.simultaneous_events);
  get_flag("orphan_objects", c.orphan_objects);
  get_flag("orphan_events", c.orphan_events);
  return c;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  int range(int lo, int hi) {  // inclusive
    if (hi <= lo) return lo;
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

namespace gendetail {

inline std::uint64_t substream_seed(std::uint64_t seed, const char* label) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char* p = label; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 0x100000001b3ull;
  }
  return seed ^ h;
}

}  // namespace gendetail

inline OCLog generate(const GenConfig& cfg) {
  if (cfg.n_customers < 1 || cfg.n_orders < 1 || cfg.n_packages < 1 ||
      cfg.items_per_order_min < 1 || cfg.items_per_order_max < cfg.items_per_order_min)
    throw LookupError(LookupError::What::InvalidConfig,
                      "populations must be positive and item range ordered");

  auto stream = [&](const char* label) {
    return SplitMix64(gendetail::substream_seed(cfg.seed, label));
  };

  const Timestamp base = *Timestamp::parse("2024-01-01T08:00:00.000Z");
  std::int64_t clock = 0;  // minutes
  auto tick = [&] { return Timestamp::from_millis(base.millis() + 60000 * clock++); };

  std::vector<ObjectType> types;
  types.push_back({"customer", std::nullopt, {{"name", ValueKind::Text},
                                              {"address", ValueKind::Map}}});
  types.push_back({"order", std::nullopt, {{"channel", ValueKind::Text},
                                           {"total", ValueKind::Real},
                                           {"due", ValueKind::Time},
                                           {"tags", ValueKind::List}}});
  if (cfg.inheritance)
    types.push_back({"express_order", "order", {{"priority", ValueKind::Integer}}});
  types.push_back({"item", std::nullopt, {{"price", ValueKind::Integer}}});
  types.push_back({"package", std::nullopt, {{"fragile", ValueKind::Boolean}}});
  if (cfg.schema_evolution) types.push_back({"carrier", std::nullopt, {{"name", ValueKind::Text}}});
  if (cfg.orphan_objects) types.push_back({"note", std::nullopt, {}});

  std::vector<EventType> etypes;
  etypes.push_back({"place_order", {{"channel", ValueKind::Text}}});
  etypes.push_back({"pack_items", {{"station", ValueKind::Integer}}});
  etypes.push_back({"deliver_package", {{"signed", ValueKind::Boolean}}});
  if (cfg.dynamic_attrs || cfg.simultaneous_events)
    etypes.push_back({"apply_discount", {{"percent", ValueKind::Integer}}});
  if (cfg.simultaneous_events) etypes.push_back({"price_check", {}});
  if (cfg.schema_evolution) {
    etypes.push_back({"assign_carrier", {}});
    etypes.push_back({"reassign_carrier", {}});
  }
  if (cfg.orphan_events) etypes.push_back({"system_maintenance", {}});

  std::vector<Object> objects;
  std::vector<Event> events;

  auto rng_customers = stream("customers");
  for (int i = 1; i <= cfg.n_customers; ++i) {
    Object c;
    c.id = "customer_" + std::to_string(i);
    c.type = "customer";
    c.initial_attributes["name"] = AttributeValue("Customer " + std::to_string(i));
    c.initial_attributes["address"] = AttributeValue(AttributeValue::Map{
        {"city", AttributeValue(rng_customers.below(2) ? "Leuven" : "Ghent")},
        {"zip", AttributeValue(static_cast<std::int64_t>(1000 + rng_customers.below(9000)))}});
    objects.push_back(std::move(c));
  }

  auto rng_orders = stream("orders");
  auto rng_items = stream("items");
  std::vector<std::vector<std::string>> order_items(static_cast<std::size_t>(cfg.n_orders) + 1);
  for (int i = 1; i <= cfg.n_orders; ++i) {
    Object o;
    o.id = "order_" + std::to_string(i);
    o.type = cfg.inheritance && i % 3 == 1 ? "express_order" : "order";
    o.initial_attributes["channel"] = AttributeValue(rng_orders.below(2) ? "web" : "store");
    o.initial_attributes["total"] =
        AttributeValue(static_cast<double>(rng_orders.below(20000)) / 100.0);
    o.initial_attributes["due"] = AttributeValue(
        Timestamp::from_millis(base.millis() + 86400000LL * (1 + static_cast<std::int64_t>(rng_orders.below(14)))));
    o.initial_attributes["tags"] = AttributeValue(AttributeValue::List{
        AttributeValue(rng_orders.below(2) ? "gift" : "standard")});
    if (o.type == "express_order")
      o.initial_attributes["priority"] =
          AttributeValue(static_cast<std::int64_t>(1 + rng_orders.below(3)));
    objects.push_back(std::move(o));

    const int n_items = rng_items.range(cfg.items_per_order_min, cfg.items_per_order_max);
    for (int k = 1; k <= n_items; ++k) {
      Object item;
      item.id = "item_" + std::to_string(i) + "_" + std::to_string(k);
      item.type = "item";
      item.initial_attributes["price"] =
          AttributeValue(static_cast<std::int64_t>(5 + rng_items.below(95)));
      order_items[static_cast<std::size_t>(i)].push_back(item.id);
      objects.push_back(std::move(item));
    }
  }

  auto object_ref = [&](const std::string& id) -> Object& {
    for (auto& o : objects)
      if (o.id == id) return o;
    throw LookupError(LookupError::What::UnknownObject, id);
  };

  // Placement events; orders relate to their customer statically.
  auto rng_events = stream("events");
  for (int i = 1; i <= cfg.n_orders; ++i) {
    const std::string order_id = "order_" + std::to_string(i);
    const std::string customer_id =
        "customer_" + std::to_string(1 + static_cast<int>(rng_events.below(
                              static_cast<std::uint64_t>(cfg.n_customers))));
    Event e;
    e.id = "e_place_" + std::to_string(i);
    e.activity = "place_order";
    e.timestamp = tick();
    e.attributes["channel"] = object_ref(order_id).initial_attributes.at("channel");
    e.e2o.push_back({order_id, "order"});
    e.e2o.push_back({customer_id, "by"});
    for (const auto& item : order_items[static_cast<std::size_t>(i)])
      e.e2o.push_back({item, "line"});
    events.push_back(std::move(e));

    object_ref(order_id).relations.push_back(
        {order_id, customer_id, "placed_by", std::nullopt, std::nullopt, std::nullopt});
  }

  // Packing: items are distributed over packages; with nm_relations some
  // items are split across two packages, making "contains" many-to-many.
  std::vector<std::vector<std::string>> package_items(static_cast<std::size_t>(cfg.n_packages) + 1);
  {
    auto rng_pack = stream("packing");
    std::vector<std::string> all_items;
    for (int i = 1; i <= cfg.n_orders; ++i)
      for (const auto& item : order_items[static_cast<std::size_t>(i)]) all_items.push_back(item);
    for (std::size_t k = 0; k < all_items.size(); ++k) {
      const int pkg = 1 + static_cast<int>(k % static_cast<std::size_t>(cfg.n_packages));
      package_items[static_cast<std::size_t>(pkg)].push_back(all_items[k]);
      if (cfg.nm_relations && k % 3 == 0 && cfg.n_packages > 1) {
        int other = 1 + static_cast<int>(rng_pack.below(static_cast<std::uint64_t>(cfg.n_packages)));
        if (other == pkg) other = 1 + other % cfg.n_packages;
        package_items[static_cast<std::size_t>(other)].push_back(all_items[k]);
      }
    }
  }
  for (int p = 1; p <= cfg.n_packages; ++p) {
    Object pkg;
    pkg.id = "package_" + std::to_string(p);
    pkg.type = "package";
    pkg.initial_attributes["fragile"] = AttributeValue(rng_events.below(4) == 0);
    objects.push_back(std::move(pkg));
  }
  for (int p = 1; p <= cfg.n_packages; ++p) {
    const std::string pkg_id = "package_" + std::to_string(p);
    Event e;
    e.id = "e_pack_" + std::to_string(p);
    e.activity = "pack_items";
    e.timestamp = tick();
    e.attributes["station"] = AttributeValue(static_cast<std::int64_t>(1 + rng_events.below(5)));
    e.e2o.push_back({pkg_id, "package"});
    std::set<std::string> seen;
    for (const auto& item : package_items[static_cast<std::size_t>(p)]) {
      if (!seen.insert(item).second) continue;
      e.e2o.push_back({item, "content"});
      object_ref(pkg_id).relations.push_back(
          {pkg_id, item, "contains", std::nullopt, std::nullopt, std::nullopt});
    }
    events.push_back(std::move(e));
  }

  // Discounts: price changes are recorded timestamp-keyed (cause absent),
  // the way OCEL 2.0 stores them; with simultaneous_events every second
  // discounted item also gets a same-instant price check, which makes the
  // change ambiguous.
  if (cfg.dynamic_attrs || cfg.simultaneous_events) {
    auto rng_disc = stream("discounts");
    int n = 0;
    for (int i = 1; i <= cfg.n_orders; ++i) {
      for (const auto& item_id : order_items[static_cast<std::size_t>(i)]) {
        if (rng_disc.below(2) == 0 && n > 0) continue;  // first item always discounted
        ++n;
        const Timestamp at = tick();
        Event e;
        e.id = "e_disc_" + std::to_string(n);
        e.activity = "apply_discount";
        e.timestamp = at;
        e.attributes["percent"] = AttributeValue(static_cast<std::int64_t>(5 + rng_disc.below(20)));
        e.e2o.push_back({item_id, "target"});
        events.push_back(std::move(e));
        if (cfg.simultaneous_events && n % 2 == 1) {
          Event check;
          check.id = "e_check_" + std::to_string(n);
          check.activity = "price_check";
          check.timestamp = at;
          check.e2o.push_back({item_id, "target"});
          events.push_back(std::move(check));
        }
        if (cfg.dynamic_attrs) {
          Object& item = object_ref(item_id);
          const auto old_price = item.initial_attributes.at("price").as_int();
          item.changes.push_back({"price",
                                  AttributeValue(std::max<std::int64_t>(1, old_price - 1 -
                                                     static_cast<std::int64_t>(rng_disc.below(5)))),
                                  at, std::nullopt});
        }
      }
    }
  }

  // Carrier assignment and mid-process reassignment (schema evolution):
  // the package-carrier relation is replaced at the reassignment instant,
  // both halves caused by their events.
  if (cfg.schema_evolution) {
    for (int c = 1; c <= 2; ++c) {
      Object carrier;
      carrier.id = "carrier_" + std::to_string(c);
      carrier.type = "carrier";
      carrier.initial_attributes["name"] = AttributeValue(c == 1 ? "Speedy" : "Turtle");
      objects.push_back(std::move(carrier));
    }
    for (int p = 1; p <= cfg.n_packages; ++p) {
      const std::string pkg_id = "package_" + std::to_string(p);
      const std::string first = "carrier_" + std::to_string(1 + (p % 2));
      const std::string second = "carrier_" + std::to_string(1 + ((p + 1) % 2));

      const Timestamp t_assign = tick();
      Event assign;
      assign.id = "e_assign_" + std::to_string(p);
      assign.activity = "assign_carrier";
      assign.timestamp = t_assign;
      assign.e2o.push_back({pkg_id, "package"});
      assign.e2o.push_back({first, "carrier"});
      events.push_back(std::move(assign));

      const Timestamp t_reassign = tick();
      Event reassign;
      reassign.id = "e_reassign_" + std::to_string(p);
      reassign.activity = "reassign_carrier";
      reassign.timestamp = t_reassign;
      reassign.e2o.push_back({pkg_id, "package"});
      reassign.e2o.push_back({second, "carrier"});
      events.push_back(std::move(reassign));

      Object& pkg = object_ref(pkg_id);
      pkg.relations.push_back(
          {pkg_id, first, "assigned_to", t_assign, t_reassign, "e_assign_" + std::to_string(p)});
      pkg.relations.push_back(
          {pkg_id, second, "assigned_to", t_reassign, std::nullopt, "e_reassign_" + std::to_string(p)});
    }
  }

  // Delivery closes each package's lifecycle.
  for (int p = 1; p <= cfg.n_packages; ++p) {
    Event e;
    e.id = "e_deliver_" + std::to_string(p);
    e.activity = "deliver_package";
    e.timestamp = tick();
    e.attributes["signed"] = AttributeValue(rng_events.below(3) != 0);
    e.e2o.push_back({"package_" + std::to_string(p), "package"});
    events.push_back(std::move(e));
  }

  if (cfg.orphan_objects) {
    Object ghost;
    ghost.id = "orphan_note_1";
    ghost.type = "note";
    objects.push_back(std::move(ghost));
  }
  if (cfg.orphan_events) {
    Event ghost;
    ghost.id = "e_maintenance_1";
    ghost.activity = "system_maintenance";
    ghost.timestamp = tick();
    events.push_back(std::move(ghost));
  }

  auto built = build_log(std::move(types), std::move(etypes), std::move(objects),
                         std::move(events), Mode::Lax);
  if (!built.ok())
    throw LookupError(LookupError::What::InvalidConfig,
                      "generator produced an invalid log: " + built.error_summary());
  return std::move(*built.log);
}

// --------------------------------------------------------------------------
// Full-object-model-per-event storage emulation
// --------------------------------------------------------------------------

struct XocEmulation {
  std::size_t events = 0;
  std::size_t relation_updating_events = 0;
  std::size_t rocel_bytes = 0;
  // Baseline bytes plus one full object-model snapshot per relation-
  // updating event; no file is produced.
  std::size_t emulated_bytes = 0;
  double ratio = 0.0;
};

inline XocEmulation emulate_xoc_size(const OCLog& log) {
  XocEmulation out;
  out.events = log.events().size();
  out.rocel_bytes = codec::write_rocel(log).size();

  // Snapshot of the complete object model at one instant: every object
  // with its attribute values resolved at t plus the active relations.
  auto snapshot_bytes = [&](Timestamp at) -> std::size_t {
    codec::Json model = codec::Json::array();
    for (const auto& o : log.objects()) {
      codec::Json jo = codec::Json::object();
      jo["id"] = o.id;
      jo["type"] = o.type;
      codec::Json attrs = codec::Json::object();
      std::set<std::string> names;
      for (const auto& [name, v] : o.initial_attributes) names.insert(name);
      for (const auto& c : o.changes) names.insert(c.attribute);
      for (const auto& name : names)
        attrs[name] = codec::value_to_json(resolve_attribute(log, o.id, name, at));
      jo["attributes"] = std::move(attrs);
      codec::Json rels = codec::Json::array();
      for (const auto& r : o.relations) {
        if (!r.active_at(at)) continue;
        codec::Json jr = codec::Json::object();
        jr["target"] = r.target;
        jr["qualifier"] = r.qualifier;
        rels.push_back(std::move(jr));
      }
      jo["relations"] = std::move(rels);
      model.push_back(std::move(jo));
    }
    return model.dump().size();
  };

  std::set<std::int64_t> update_instants;
  for (const auto& o : log.objects()) {
    for (const auto& r : o.relations) {
      if (r.change_cause) {
        if (const Event* e = log.find_event(*r.change_cause))
          update_instants.insert(e->timestamp.millis());
      }
      if (r.valid_from) update_instants.insert(r.valid_from->millis());
      if (r.valid_to) update_instants.insert(r.valid_to->millis());
    }
  }

  out.emulated_bytes = out.rocel_bytes;
  for (const auto& e : log.events()) {
    if (!update_instants.count(e.timestamp.millis())) continue;
    out.relation_updating_events += 1;
    out.emulated_bytes += snapshot_bytes(e.timestamp);
  }
  out.ratio = out.rocel_bytes == 0
                  ? 0.0
                  : static_cast<double>(out.emulated_bytes) / static_cast<double>(out.rocel_bytes);
  return out;
}

}  // namespace oclog
