#include <catch2/catch_amalgamated.hpp>

#include "oclog/model.hpp"
#include "test_util.hpp"

using namespace oclog;
using namespace testutil;

TEST_CASE("timestamps parse and render canonically") {
  auto t1 = Timestamp::parse("2024-03-05T12:30:45.123Z");
  REQUIRE(t1.has_value());
  CHECK(t1->to_iso() == "2024-03-05T12:30:45.123Z");

  SECTION("value -> string -> value is the identity") {
    for (std::int64_t ms : {0LL, 1LL, 999LL, -1LL, 1700000000123LL, -86400000LL}) {
      auto v = Timestamp::from_millis(ms);
      auto back = Timestamp::parse(v.to_iso());
      REQUIRE(back.has_value());
      CHECK(back->millis() == ms);
    }
  }

  SECTION("offsets normalize to UTC") {
    auto plus = Timestamp::parse("2024-03-05T14:30:45.123+02:00");
    REQUIRE(plus.has_value());
    CHECK(plus->millis() == t1->millis());
    auto compact = Timestamp::parse("2024-03-05T10:30:45.123-0200");
    REQUIRE(compact.has_value());
    CHECK(compact->millis() == t1->millis());
  }

  SECTION("fractional digits beyond milliseconds truncate") {
    auto ns = Timestamp::parse("2024-03-05T12:30:45.123456789Z");
    REQUIRE(ns.has_value());
    CHECK(ns->millis() == t1->millis());
  }

  SECTION("malformed inputs are rejected") {
    CHECK_FALSE(Timestamp::parse("").has_value());
    CHECK_FALSE(Timestamp::parse("2024-03-05").has_value());
    CHECK_FALSE(Timestamp::parse("2024-03-05T12:30:45").has_value());  // no offset
    CHECK_FALSE(Timestamp::parse("2024-13-05T12:30:45Z").has_value());
    CHECK_FALSE(Timestamp::parse("2024-02-30T12:30:45Z").has_value());
    CHECK_FALSE(Timestamp::parse("not a date").has_value());
  }

  SECTION("total order") {
    CHECK(t(1) < t(2));
    CHECK(t(2) == t(2));
  }
}

TEST_CASE("attribute values are structural") {
  AttributeValue a(AttributeValue::List{AttributeValue(1), AttributeValue("x")});
  AttributeValue b(AttributeValue::List{AttributeValue(1), AttributeValue("x")});
  CHECK(a == b);
  CHECK(a.kind() == ValueKind::List);

  AttributeValue i(1);
  AttributeValue r(1.0);
  CHECK(i != r);  // integers are distinct from reals

  SECTION("depth counts nesting") {
    AttributeValue leaf("v");
    CHECK(leaf.depth() == 1);
    AttributeValue nested(AttributeValue::Map{{"k", AttributeValue(AttributeValue::List{leaf})}});
    CHECK(nested.depth() == 3);
  }
}

TEST_CASE("build_log accepts a minimal valid log") {
  auto log = minimal_log();
  CHECK(log.events().size() == 1);
  CHECK(log.objects().size() == 1);
  CHECK(log.find_event("e1") != nullptr);
  CHECK(log.find_object("o1") != nullptr);
}

TEST_CASE("build_log rejects dangling references") {
  ObjectType ot{"order", std::nullopt, {}};
  EventType et{"create", {}};
  Object o{"o1", "order", {}, {}, {}};
  Event e{"e1", "create", t(1), {}, {{"o99", std::nullopt}}};
  auto r = build_log({ot}, {et}, {o}, {e});
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].code == BuildError::Code::DanglingReference);
  CHECK(r.errors[0].detail.find("o99") != std::string::npos);
}

TEST_CASE("build_log rejects type cycles") {
  ObjectType a{"A", "B", {}};
  ObjectType b{"B", "A", {}};
  auto r = build_log({a, b}, {}, {}, {});
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].code == BuildError::Code::TypeCycle);
  CHECK(r.errors[0].cycle == std::vector<std::string>{"A", "B", "A"});
}

TEST_CASE("build_log rejects duplicate ids per namespace") {
  ObjectType ot{"order", std::nullopt, {}};
  EventType et{"create", {}};
  Object o1{"o1", "order", {}, {}, {}};
  Object o2{"o1", "order", {}, {}, {}};
  auto r = build_log({ot}, {et}, {o1, o2}, {});
  REQUIRE_FALSE(r.ok());
  CHECK(r.errors[0].code == BuildError::Code::DuplicateId);

  SECTION("event and object ids may collide textually") {
    Object o{"x1", "order", {}, {}, {}};
    Event e{"x1", "create", t(1), {}, {{"x1", std::nullopt}}};
    auto ok = build_log({ot}, {et}, {o}, {e});
    CHECK(ok.ok());
  }
}

TEST_CASE("build_log rejects conflicting redeclared inherited attributes") {
  ObjectType parent{"Shipment", std::nullopt, {{"carrier", ValueKind::Text}}};
  ObjectType child{"Parcel", "Shipment", {{"carrier", ValueKind::Integer}}};
  auto r = build_log({parent, child}, {}, {}, {});
  REQUIRE_FALSE(r.ok());
  CHECK(r.errors[0].code == BuildError::Code::SchemaMismatch);
}

TEST_CASE("build_log enforces change-cause consistency") {
  ObjectType ot{"order", std::nullopt, {{"price", ValueKind::Integer}}};
  EventType et{"create", {}};
  Event e{"e1", "create", t(1), {}, {{"o1", std::nullopt}}};

  SECTION("cause must exist") {
    Object o{"o1", "order", {}, {{"price", AttributeValue(5), t(1), "e9"}}, {}};
    auto r = build_log({ot}, {et}, {o}, {e});
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors[0].code == BuildError::Code::DanglingReference);
  }
  SECTION("cause timestamp must match the change instant") {
    Object o{"o1", "order", {}, {{"price", AttributeValue(5), t(2), "e1"}}, {}};
    auto r = build_log({ot}, {et}, {o}, {e});
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors[0].code == BuildError::Code::SchemaMismatch);
  }
}

TEST_CASE("strict mode enforces schema and E2O cardinality") {
  ObjectType ot{"order", std::nullopt, {{"price", ValueKind::Integer}}};
  EventType et{"create", {}};

  SECTION("undeclared attribute rejected in strict, accepted lax") {
    Object o{"o1", "order", {{"color", AttributeValue("red")}}, {}, {}};
    Event e{"e1", "create", t(1), {}, {{"o1", std::nullopt}}};
    CHECK_FALSE(build_log({ot}, {et}, {o}, {e}, Mode::Strict).ok());
    CHECK(build_log({ot}, {et}, {o}, {e}, Mode::Lax).ok());
  }
  SECTION("orphan object rejected in strict only") {
    Object o{"o1", "order", {}, {}, {}};
    auto strict = build_log({ot}, {et}, {o}, {}, Mode::Strict);
    REQUIRE_FALSE(strict.ok());
    CHECK(build_log({ot}, {et}, {o}, {}, Mode::Lax).ok());
  }
}

TEST_CASE("resolve_attribute follows the latest change at or before the query") {
  ObjectType ot{"item", std::nullopt, {{"price", ValueKind::Integer}}};
  EventType et{"touch", {}};
  Event e2{"e2", "touch", t(2), {}, {{"i1", std::nullopt}}};
  Event e5{"e5", "touch", t(5), {}, {{"i1", std::nullopt}}};
  Object o{"i1",
           "item",
           {{"price", AttributeValue(10)}},
           {{"price", AttributeValue(12), t(2), "e2"}, {"price", AttributeValue(15), t(5), "e5"}},
           {}};
  auto log = *build_log({ot}, {et}, {o}, {e2, e5}, Mode::Strict).log;

  CHECK(resolve_attribute(log, "i1", "price", t(4)) == AttributeValue(12));
  CHECK(resolve_attribute(log, "i1", "price", t(1)) == AttributeValue(10));
  CHECK(resolve_attribute(log, "i1", "price", t(9)) == AttributeValue(15));
  CHECK(resolve_attribute(log, "i1", "price", t(2)) == AttributeValue(12));

  SECTION("pre-first-change with absent initial resolves to null") {
    Object bare{"i2", "item", {}, {{"price", AttributeValue(7), t(2), std::nullopt}}, {}};
    Event e0{"e0", "touch", t(0), {}, {{"i2", std::nullopt}}};
    auto lax = *build_log({ot}, {et}, {bare}, {e0}, Mode::Lax).log;
    CHECK(resolve_attribute(lax, "i2", "price", t(1)).is_null());
  }

  SECTION("unknown object throws") {
    CHECK_THROWS_AS(resolve_attribute(log, "zz", "price", t(1)), LookupError);
  }
  SECTION("unknown attribute throws in strict mode only") {
    CHECK_THROWS_AS(resolve_attribute(log, "i1", "nope", t(1)), LookupError);
  }

  SECTION("matches the linear-scan oracle on a generated history") {
    // Build a dense change history; compare the two routes at every probe.
    std::vector<AttributeChange> changes;
    std::vector<Event> events;
    for (int k = 1; k <= 12; ++k) {
      events.push_back({"ev" + std::to_string(k), "touch", t(k), {}, {{"x", std::nullopt}}});
      if (k % 2 == 0)
        changes.push_back({"price", AttributeValue(k * 100), t(k),
                           k % 4 == 0 ? std::optional<std::string>("ev" + std::to_string(k))
                                      : std::nullopt});
    }
    Object x{"x", "item", {{"price", AttributeValue(1)}}, changes, {}};
    auto lax = *build_log({ot}, {et}, {x}, events, Mode::Lax).log;
    for (int probe = 0; probe <= 13; ++probe) {
      CAPTURE(probe);
      CHECK(resolve_attribute(lax, "x", "price", t(probe)) ==
            resolve_oracle(lax, "x", "price", t(probe)));
    }
  }
}

TEST_CASE("resolution is right-continuous and piecewise constant") {
  ObjectType ot{"item", std::nullopt, {{"v", ValueKind::Integer}}};
  EventType et{"touch", {}};
  Event e3{"e3", "touch", t(3), {}, {{"i", std::nullopt}}};
  Object o{"i", "item", {}, {{"v", AttributeValue(1), t(3), "e3"}}, {}};
  auto log = *build_log({ot}, {et}, {o}, {e3}, Mode::Lax).log;

  // No change in (t3, t8]: every probe there must agree with t3.
  auto at3 = resolve_attribute(log, "i", "v", t(3));
  for (int m = 4; m <= 8; ++m) CHECK(resolve_attribute(log, "i", "v", t(m)) == at3);
}

TEST_CASE("effective_schema unions ancestor declarations") {
  ObjectType shipment{"Shipment", std::nullopt, {{"carrier", ValueKind::Text}}};
  ObjectType parcel{"Parcel", "Shipment", {{"weight", ValueKind::Real}}};
  auto log = *build_log({shipment, parcel}, {}, {}, {}).log;

  auto parcel_schema = effective_schema(log, "Parcel");
  CHECK(parcel_schema ==
        std::map<std::string, ValueKind>{{"carrier", ValueKind::Text}, {"weight", ValueKind::Real}});
  CHECK(effective_schema(log, "Shipment") ==
        std::map<std::string, ValueKind>{{"carrier", ValueKind::Text}});

  SECTION("monotone: subtype schema contains parent schema") {
    for (const auto& [k, v] : effective_schema(log, "Shipment")) {
      REQUIRE(parcel_schema.count(k) == 1);
      CHECK(parcel_schema.at(k) == v);
    }
  }
  SECTION("unknown type throws") {
    CHECK_THROWS_AS(effective_schema(log, "Nope"), LookupError);
  }
}

TEST_CASE("object_graph_at filters by validity interval") {
  ObjectType ot{"thing", std::nullopt, {}};
  Object o1{"o1", "thing", {}, {}, {{"o1", "o2", "contains", std::nullopt, std::nullopt, std::nullopt}}};
  Object o2{"o2", "thing", {}, {}, {}};
  auto log = *build_log({ot}, {}, {o1, o2}, {}).log;

  SECTION("unbounded relations are active at every time") {
    for (int m : {-100, 0, 5, 100000}) {
      auto g = object_graph_at(log, t(m));
      REQUIRE(g.size() == 1);
      CHECK(g.begin()->qualifier == "contains");
    }
  }

  SECTION("bounded relation excludes instants outside [from, to)") {
    Object b1{"b1", "thing", {}, {}, {{"b1", "b2", "holds", t(2), t(4), std::nullopt}}};
    Object b2{"b2", "thing", {}, {}, {}};
    auto blog = *build_log({ot}, {}, {b1, b2}, {}).log;
    CHECK(object_graph_at(blog, t(5)).empty());
    CHECK(object_graph_at(blog, t(1)).empty());
    CHECK(object_graph_at(blog, t(2)).size() == 1);
    CHECK(object_graph_at(blog, t(3)).size() == 1);
  }

  SECTION("generated corpus snapshots equal the brute-force filter") {
    // Random-ish deterministic relation soup over 8 objects.
    std::vector<Object> objs;
    for (int i = 0; i < 8; ++i) objs.push_back({"n" + std::to_string(i), "thing", {}, {}, {}});
    unsigned state = 12345;
    auto next = [&] { return state = state * 1103515245u + 12345u; };
    for (int k = 0; k < 40; ++k) {
      auto& owner = objs[next() % 8];
      std::string target = "n" + std::to_string(next() % 8);
      if (target == owner.id) continue;
      std::optional<Timestamp> from, to;
      if (next() % 3) from = t(static_cast<int>(next() % 10));
      if (next() % 3) {
        int base = from ? static_cast<int>((from->millis() - t(0).millis()) / 60000) : 0;
        to = t(base + 1 + static_cast<int>(next() % 10));
      }
      owner.relations.push_back({owner.id, target, "q" + std::to_string(next() % 3), from, to, std::nullopt});
    }
    auto rlog = *build_log({ot}, {}, objs, {}).log;
    for (int probe = -1; probe <= 21; ++probe) {
      std::set<std::tuple<std::string, std::string, std::string>> got;
      for (const auto& e : object_graph_at(rlog, t(probe))) got.insert({e.source, e.target, e.qualifier});
      CHECK(got == snapshot_oracle(rlog, t(probe)));
    }
  }

  SECTION("monotone under relation insertion") {
    Object e1{"e1x", "thing", {}, {}, {{"e1x", "e2x", "q", t(1), t(3), std::nullopt}}};
    Object e2{"e2x", "thing", {}, {}, {}};
    auto small = *build_log({ot}, {}, {e1, e2}, {}).log;
    Object e1b = e1;
    e1b.relations.push_back({"e1x", "e2x", "r", std::nullopt, std::nullopt, std::nullopt});
    auto larger = *build_log({ot}, {}, {e1b, e2}, {}).log;
    for (int m = 0; m <= 4; ++m) {
      auto before = object_graph_at(small, t(m));
      auto after = object_graph_at(larger, t(m));
      for (const auto& edge : before) CHECK(after.count(edge) == 1);
    }
  }
}

TEST_CASE("derived_relation_closure matches the cubic oracle") {
  ObjectType ot{"thing", std::nullopt, {}};

  SECTION("two-hop chain") {
    Object a{"a", "thing", {}, {}, {{"a", "b", "q", std::nullopt, std::nullopt, std::nullopt}}};
    Object b{"b", "thing", {}, {}, {{"b", "c", "q", std::nullopt, std::nullopt, std::nullopt}}};
    Object c{"c", "thing", {}, {}, {}};
    auto log = *build_log({ot}, {}, {a, b, c}, {}).log;
    auto closure = derived_relation_closure(log, t(0));
    CHECK(closure.count({"a", "c"}) == 1);
    CHECK(closure == closure_oracle_at(log, t(0)));
  }

  SECTION("empty graph") {
    auto log = *build_log({ot}, {}, {}, {}).log;
    CHECK(derived_relation_closure(log, t(0)).empty());
  }

  SECTION("random 20-node graphs") {
    unsigned state = 99;
    auto next = [&] { return state = state * 1103515245u + 12345u; };
    for (int round = 0; round < 5; ++round) {
      std::vector<Object> objs;
      for (int i = 0; i < 20; ++i) objs.push_back({"v" + std::to_string(i), "thing", {}, {}, {}});
      for (int k = 0; k < 45; ++k) {
        auto& owner = objs[next() % 20];
        std::string target = "v" + std::to_string(next() % 20);
        if (target == owner.id) continue;
        owner.relations.push_back({owner.id, target, "q", std::nullopt, std::nullopt, std::nullopt});
      }
      auto log = build_log({ot}, {}, objs, {}).log;
      REQUIRE(log.has_value());
      CHECK(derived_relation_closure(*log, t(0)) == closure_oracle_at(*log, t(0)));
    }
  }
}

TEST_CASE("referential integrity rejects every single dangling mutation") {
  // Start from a valid multi-entity log, then break one reference at a
  // time; each mutation must be rejected.
  ObjectType ot{"order", std::nullopt, {{"price", ValueKind::Integer}}};
  EventType et{"create", {}};
  Object o1{"o1", "order", {}, {{"price", AttributeValue(1), t(1), "e1"}},
            {{"o1", "o2", "rel", std::nullopt, std::nullopt, std::nullopt}}};
  Object o2{"o2", "order", {}, {}, {}};
  Event e1{"e1", "create", t(1), {}, {{"o1", std::nullopt}, {"o2", std::nullopt}}};

  auto base = build_log({ot}, {et}, {o1, o2}, {e1});
  REQUIRE(base.ok());

  SECTION("dangle e2o") {
    Event bad = e1;
    bad.e2o[0].object = "gone";
    CHECK_FALSE(build_log({ot}, {et}, {o1, o2}, {bad}).ok());
  }
  SECTION("dangle object type") {
    Object bad = o2;
    bad.type = "gone";
    CHECK_FALSE(build_log({ot}, {et}, {o1, bad}, {e1}).ok());
  }
  SECTION("dangle activity") {
    Event bad = e1;
    bad.activity = "gone";
    CHECK_FALSE(build_log({ot}, {et}, {o1, o2}, {bad}).ok());
  }
  SECTION("dangle relation target") {
    Object bad = o1;
    bad.relations[0].target = "gone";
    CHECK_FALSE(build_log({ot}, {et}, {bad, o2}, {e1}).ok());
  }
  SECTION("dangle change cause") {
    Object bad = o1;
    bad.changes[0].cause = "gone";
    CHECK_FALSE(build_log({ot}, {et}, {bad, o2}, {e1}).ok());
  }
}

TEST_CASE("event order is total and deterministic") {
  ObjectType ot{"x", std::nullopt, {}};
  EventType et{"a", {}};
  Object o{"o", "x", {}, {}, {}};
  std::vector<Event> events = {
      {"e3", "a", t(1), {}, {{"o", std::nullopt}}},
      {"e1", "a", t(2), {}, {{"o", std::nullopt}}},
      {"e2", "a", t(1), {}, {{"o", std::nullopt}}},
  };
  // Two insertion orders, same canonical order.
  auto log1 = *build_log({ot}, {et}, {o}, events).log;
  std::reverse(events.begin(), events.end());
  auto log2 = *build_log({ot}, {et}, {o}, events).log;

  std::vector<std::string> ids1, ids2;
  for (const auto& e : log1.events()) ids1.push_back(e.id);
  for (const auto& e : log2.events()) ids2.push_back(e.id);
  CHECK(ids1 == std::vector<std::string>{"e2", "e3", "e1"});
  CHECK(ids1 == ids2);
  CHECK(log1 == log2);
}

TEST_CASE("reflexive relations require an allowance") {
  ObjectType ot{"x", std::nullopt, {}};
  Object o{"o", "x", {}, {}, {{"o", "o", "self", std::nullopt, std::nullopt, std::nullopt}}};
  CHECK_FALSE(build_log({ot}, {}, {o}, {}).ok());

  LogMeta meta;
  meta.reflexive_qualifiers = {"self"};
  CHECK(build_log({ot}, {}, {o}, {}, Mode::Lax, meta).ok());
}

TEST_CASE("nesting depth beyond the limit is rejected") {
  ObjectType ot{"x", std::nullopt, {{"deep", ValueKind::List}}};
  AttributeValue v("leaf");
  for (int i = 0; i < AttributeValue::kMaxDepth + 1; ++i) v = AttributeValue(AttributeValue::List{v});
  Object o{"o", "x", {{"deep", v}}, {}, {}};
  CHECK_FALSE(build_log({ot}, {}, {o}, {}).ok());
}
