#include <catch2/catch_amalgamated.hpp>

#include "oclog/formats.hpp"
#include "oclog/generate.hpp"
#include "oclog/refine.hpp"
#include "oclog/validate.hpp"
#include "test_util.hpp"

using namespace oclog;
using namespace testutil;

TEST_CASE("key_changes_by_event assigns unique same-instant candidates") {
  ObjectType ot{"item", std::nullopt, {{"price", ValueKind::Integer}}};
  EventType et{"touch", {}};

  SECTION("unique candidate becomes the cause") {
    Event e5{"e5", "touch", t(3), {}, {{"i1", std::nullopt}}};
    Object o{"i1", "item", {}, {{"price", AttributeValue(7), t(3), std::nullopt}}, {}};
    auto log = *build_log({ot}, {et}, {o}, {e5}).log;
    auto outcome = key_changes_by_event(log);
    CHECK(outcome.resolved == 1);
    CHECK(outcome.unresolved.empty());
    REQUIRE(outcome.log.find_object("i1")->changes.size() == 1);
    CHECK(outcome.log.find_object("i1")->changes[0].cause == "e5");
    CHECK(outcome.log.find_object("i1")->changes[0].value == AttributeValue(7));
    CHECK(outcome.log.find_object("i1")->changes[0].at == t(3));
  }

  SECTION("two simultaneous candidates stay unresolved, log unchanged") {
    Event e1{"e1", "touch", t(3), {}, {{"i1", std::nullopt}}};
    Event e2{"e2", "touch", t(3), {}, {{"i1", std::nullopt}}};
    Object o{"i1", "item", {}, {{"price", AttributeValue(7), t(3), std::nullopt}}, {}};
    auto log = *build_log({ot}, {et}, {o}, {e1, e2}).log;
    auto outcome = key_changes_by_event(log);
    CHECK(outcome.resolved == 0);
    REQUIRE(outcome.unresolved.size() == 1);
    CHECK(outcome.unresolved[0].candidate_events == 2);
    CHECK(outcome.log == log);
  }

  SECTION("a fully caused log is a fixpoint") {
    Event e5{"e5", "touch", t(3), {}, {{"i1", std::nullopt}}};
    Object o{"i1", "item", {}, {{"price", AttributeValue(7), t(3), "e5"}}, {}};
    auto log = *build_log({ot}, {et}, {o}, {e5}).log;
    auto outcome = key_changes_by_event(log);
    CHECK(outcome.resolved == 0);
    CHECK(outcome.unresolved.empty());
    CHECK(outcome.log == log);
  }

  SECTION("idempotent and never un-assigns") {
    GenConfig cfg;
    cfg.seed = 21;
    cfg.simultaneous_events = true;
    auto log = generate(cfg);
    auto once = key_changes_by_event(log);
    auto twice = key_changes_by_event(once.log);
    CHECK(twice.resolved == 0);
    CHECK(twice.log == once.log);
    CHECK(twice.unresolved == once.unresolved);
  }

  SECTION("post-refinement S16 findings equal the unresolved list") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      GenConfig cfg;
      cfg.seed = seed;
      cfg.simultaneous_events = true;
      cfg.n_orders = 4;
      auto log = generate(cfg);
      auto outcome = key_changes_by_event(log);
      auto still_ambiguous = find_ambiguous_changes(outcome.log);
      CAPTURE(seed);
      CHECK(still_ambiguous == outcome.unresolved);
    }
  }

  SECTION("resolution matches the brute-force candidate count oracle") {
    GenConfig cfg;
    cfg.seed = 33;
    cfg.simultaneous_events = true;
    auto log = generate(cfg);
    auto outcome = key_changes_by_event(log);

    std::size_t expect_resolved = 0;
    for (const auto& o : log.objects())
      for (const auto& c : o.changes)
        if (!c.cause && candidate_count_oracle(log, o.id, c.at) == 1) expect_resolved += 1;
    CHECK(outcome.resolved == expect_resolved);
  }
}

TEST_CASE("infer_cardinality scans fan-out per side") {
  ObjectType ot{"x", std::nullopt, {}};
  auto rel = [](const std::string& s, const std::string& t, const std::string& q) {
    return O2ORelation{s, t, q, std::nullopt, std::nullopt, std::nullopt};
  };

  SECTION("orders each to one customer, customers with many orders") {
    Object o1{"order1", "x", {}, {}, {rel("order1", "cust", "to")}};
    Object o2{"order2", "x", {}, {}, {rel("order2", "cust", "to")}};
    Object c{"cust", "x", {}, {}, {}};
    auto log = *build_log({ot}, {}, {o1, o2, c}, {}).log;
    CHECK(infer_cardinality(log, "to") == Cardinality::ManyToOne);
  }
  SECTION("shared items across packages are many-to-many") {
    Object p1{"p1", "x", {}, {}, {rel("p1", "i1", "c"), rel("p1", "i2", "c")}};
    Object p2{"p2", "x", {}, {}, {rel("p2", "i1", "c")}};
    Object i1{"i1", "x", {}, {}, {}};
    Object i2{"i2", "x", {}, {}, {}};
    auto log = *build_log({ot}, {}, {p1, p2, i1, i2}, {}).log;
    CHECK(infer_cardinality(log, "c") == Cardinality::ManyToMany);
  }
  SECTION("a single relation instance is one-to-one") {
    Object a{"a", "x", {}, {}, {rel("a", "b", "q")}};
    Object b{"b", "x", {}, {}, {}};
    auto log = *build_log({ot}, {}, {a, b}, {}).log;
    CHECK(infer_cardinality(log, "q") == Cardinality::OneToOne);
  }
  SECTION("one source, many targets is one-to-many") {
    Object a{"a", "x", {}, {}, {rel("a", "b", "q"), rel("a", "c", "q")}};
    Object b{"b", "x", {}, {}, {}};
    Object c{"c", "x", {}, {}, {}};
    auto log = *build_log({ot}, {}, {a, b, c}, {}).log;
    CHECK(infer_cardinality(log, "q") == Cardinality::OneToMany);
  }
  SECTION("unknown qualifier throws") {
    auto log = *build_log({ot}, {}, {}, {}).log;
    CHECK_THROWS_AS(infer_cardinality(log, "nope"), LookupError);
  }
}

namespace {

// Closure restricted to the original log's objects: reification adds link
// objects, whose incident pairs are not part of the comparison.
std::set<std::pair<std::string, std::string>> closure_over(const OCLog& log, Timestamp at,
                                                           const OCLog& original) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [s, t] : derived_relation_closure(log, at))
    if (original.find_object(s) != nullptr && original.find_object(t) != nullptr)
      out.insert({s, t});
  return out;
}

}  // namespace

TEST_CASE("reify_relations") {
  ObjectType ot{"x", std::nullopt, {}};
  EventType et{"tick", {}};
  auto rel = [](const std::string& s, const std::string& t, const std::string& q) {
    return O2ORelation{s, t, q, std::nullopt, std::nullopt, std::nullopt};
  };

  SECTION("full 3x2 bipartite reifies into link objects") {
    std::vector<Object> objs;
    for (int i = 1; i <= 3; ++i) objs.push_back({"i" + std::to_string(i), "x", {}, {}, {}});
    for (int p = 1; p <= 2; ++p) objs.push_back({"p" + std::to_string(p), "x", {}, {}, {}});
    for (int i = 1; i <= 3; ++i)
      for (int p = 1; p <= 2; ++p)
        objs[static_cast<std::size_t>(i - 1)].relations.push_back(
            rel("i" + std::to_string(i), "p" + std::to_string(p), "in"));
    Event e{"e1", "tick", t(1), {}, {{"i1", std::nullopt}}};
    auto log = *build_log({ot}, {et}, objs, {e}).log;

    auto outcome = reify_relations(log);
    CHECK(outcome.created_objects.size() == 6);
    CHECK(outcome.log.find_object_type("in_link") != nullptr);

    std::size_t src_edges = 0, tgt_edges = 0, original_edges = 0;
    for (const auto& o : outcome.log.objects()) {
      for (const auto& r : o.relations) {
        if (r.qualifier == "in:src") src_edges += 1;
        if (r.qualifier == "in:tgt") tgt_edges += 1;
        if (r.qualifier == "in") original_edges += 1;
      }
    }
    CHECK(src_edges == 6);
    CHECK(tgt_edges == 6);
    CHECK(original_edges == 0);

    for (const auto& ev : log.events()) {
      CAPTURE(ev.id);
      CHECK(closure_over(outcome.log, ev.timestamp, log) == closure_oracle_at(log, ev.timestamp));
    }
    CHECK(infer_cardinality(outcome.log, "in:src") != Cardinality::ManyToMany);
    CHECK(infer_cardinality(outcome.log, "in:tgt") != Cardinality::ManyToMany);
  }

  SECTION("only one-to-many relations: identity") {
    Object a{"a", "x", {}, {}, {rel("a", "b", "q"), rel("a", "c", "q")}};
    Object b{"b", "x", {}, {}, {}};
    Object c{"c", "x", {}, {}, {}};
    Event e{"e1", "tick", t(1), {}, {{"a", std::nullopt}}};
    auto log = *build_log({ot}, {et}, {a, b, c}, {e}).log;
    auto outcome = reify_relations(log);
    CHECK(outcome.created_objects.empty());
    CHECK(outcome.log == log);
  }

  SECTION("stored transitive edge is removed, closure preserved") {
    Object a{"a", "x", {}, {}, {rel("a", "b", "q"), rel("a", "c", "q")}};
    Object b{"b", "x", {}, {}, {rel("b", "c", "q")}};
    Object c{"c", "x", {}, {}, {}};
    Event e{"e1", "tick", t(1), {}, {{"a", std::nullopt}}};
    auto log = *build_log({ot}, {et}, {a, b, c}, {e}).log;

    auto outcome = reify_relations(log);
    CHECK(outcome.created_objects.empty());
    std::size_t edges = 0;
    bool has_ac = false;
    for (const auto& o : outcome.log.objects())
      for (const auto& r : o.relations) {
        edges += 1;
        if (r.source == "a" && r.target == "c") has_ac = true;
      }
    CHECK(edges == 2);
    CHECK_FALSE(has_ac);
    CHECK(closure_over(outcome.log, t(1), log) == closure_oracle_at(log, t(1)));
  }

  SECTION("generated N:M corpora: closure preserved at every event instant") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      GenConfig cfg;
      cfg.seed = seed;
      cfg.nm_relations = true;
      cfg.schema_evolution = seed % 2 == 0;
      auto log = generate(cfg);
      auto outcome = reify_relations(log);
      CAPTURE(seed);
      for (const auto& ev : log.events()) {
        CHECK(closure_over(outcome.log, ev.timestamp, log) == closure_oracle_at(log, ev.timestamp));
      }
      std::set<std::string> qualifiers;
      for (const auto& o : outcome.log.objects())
        for (const auto& r : o.relations) qualifiers.insert(r.qualifier);
      for (const auto& q : qualifiers) {
        CAPTURE(q);
        CHECK(infer_cardinality(outcome.log, q) != Cardinality::ManyToMany);
      }
    }
  }

  SECTION("bounded relations keep their validity on the source half-edge") {
    // Bipartite so transitive removal cannot kick in: {a, d} -> {b, c}.
    Object a{"a", "x", {}, {}, {{"a", "b", "q", t(2), t(5), std::nullopt},
                                {"a", "c", "q", std::nullopt, std::nullopt, std::nullopt}}};
    Object d{"d", "x", {}, {}, {{"d", "b", "q", std::nullopt, std::nullopt, std::nullopt},
                                {"d", "c", "q", std::nullopt, std::nullopt, std::nullopt}}};
    Object b{"b", "x", {}, {}, {}};
    Object c{"c", "x", {}, {}, {}};
    std::vector<Event> events;
    for (int m = 1; m <= 6; ++m)
      events.push_back({"e" + std::to_string(m), "tick", t(m), {}, {{"a", std::nullopt}}});
    auto log = *build_log({ot}, {et}, {a, b, c, d}, events).log;
    REQUIRE(infer_cardinality(log, "q") == Cardinality::ManyToMany);

    auto outcome = reify_relations(log);
    REQUIRE(outcome.created_objects.size() == 4);
    for (const auto& ev : log.events()) {
      CAPTURE(ev.id);
      CHECK(closure_over(outcome.log, ev.timestamp, log) == closure_oracle_at(log, ev.timestamp));
    }
    // The bounded original must have produced exactly one bounded src edge.
    std::size_t bounded_src = 0;
    for (const auto& o : outcome.log.objects())
      for (const auto& r : o.relations) {
        if (r.qualifier == "q:src" && r.valid_from) {
          bounded_src += 1;
          CHECK(r.source == "a");
          CHECK(*r.valid_from == t(2));
          CHECK(*r.valid_to == t(5));
        }
        if (r.qualifier == "q:tgt") CHECK_FALSE(r.valid_from.has_value());
      }
    CHECK(bounded_src == 1);
  }
}

TEST_CASE("relations_as_dynamic_attributes") {
  ObjectType ot{"x", std::nullopt, {}};
  EventType et{"tick", {}};

  SECTION("onset materializes the target list at the instant") {
    Event e2{"e2", "tick", t(2), {}, {{"o1", std::nullopt}}};
    Object o1{"o1", "x", {}, {}, {{"o1", "o2", "assigned", t(2), std::nullopt, "e2"}}};
    Object o2{"o2", "x", {}, {}, {}};
    auto log = *build_log({ot}, {et}, {o1, o2}, {e2}).log;
    auto outcome = relations_as_dynamic_attributes(log);

    const Object* refined = outcome.log.find_object("o1");
    REQUIRE(refined != nullptr);
    REQUIRE(refined->changes.size() == 1);
    const auto& c = refined->changes[0];
    CHECK(c.attribute == "rel:assigned");
    CHECK(c.at == t(2));
    CHECK(c.cause == "e2");
    CHECK(c.value == AttributeValue(AttributeValue::List{AttributeValue("o2")}));
    CHECK(refined->initial_attributes.at("rel:assigned") ==
          AttributeValue(AttributeValue::List{}));
  }

  SECTION("an ending relation produces a removing change") {
    Event e5{"e5", "tick", t(5), {}, {{"o1", std::nullopt}}};
    Object o1{"o1", "x", {}, {}, {{"o1", "o2", "assigned", std::nullopt, t(5), std::nullopt}}};
    Object o2{"o2", "x", {}, {}, {}};
    auto log = *build_log({ot}, {et}, {o1, o2}, {e5}).log;
    auto outcome = relations_as_dynamic_attributes(log);

    const Object* refined = outcome.log.find_object("o1");
    REQUIRE(refined->changes.size() == 1);
    CHECK(refined->changes[0].at == t(5));
    CHECK(refined->changes[0].value == AttributeValue(AttributeValue::List{}));  // o2 removed
    CHECK(refined->initial_attributes.at("rel:assigned") ==
          AttributeValue(AttributeValue::List{AttributeValue("o2")}));
  }

  SECTION("only unbounded relations: initial value, no changes") {
    Object o1{"o1", "x", {}, {}, {{"o1", "o2", "holds", std::nullopt, std::nullopt, std::nullopt}}};
    Object o2{"o2", "x", {}, {}, {}};
    auto log = *build_log({ot}, {}, {o1, o2}, {}).log;
    auto outcome = relations_as_dynamic_attributes(log);
    const Object* refined = outcome.log.find_object("o1");
    CHECK(refined->changes.empty());
    CHECK(refined->initial_attributes.at("rel:holds") ==
          AttributeValue(AttributeValue::List{AttributeValue("o2")}));
    CHECK(outcome.resolved == 0);
  }

  SECTION("graph reconstruction equals the input snapshot at every event") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      GenConfig cfg;
      cfg.seed = seed;
      cfg.schema_evolution = true;
      cfg.nm_relations = seed % 2 == 0;
      auto log = generate(cfg);
      auto outcome = relations_as_dynamic_attributes(log);
      CAPTURE(seed);
      for (const auto& ev : log.events()) {
        auto expected = object_graph_at(log, ev.timestamp);
        auto reconstructed = graph_from_relation_attributes(outcome.log, ev.timestamp);
        CHECK(reconstructed == expected);
      }
    }
  }
}

TEST_CASE("the three refinements compose and round-trip losslessly") {
  for (std::uint64_t seed : {1ull, 4ull, 9ull}) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.nm_relations = true;
    cfg.schema_evolution = true;
    cfg.inheritance = true;
    cfg.simultaneous_events = seed % 2 == 1;
    auto log = generate(cfg);

    auto step1 = key_changes_by_event(log);
    auto step2 = reify_relations(step1.log);
    auto step3 = relations_as_dynamic_attributes(step2.log);

    CAPTURE(seed);
    auto bytes = codec::write_rocel(step3.log);
    CHECK(codec::read_rocel(bytes) == step3.log);

    // A fully resolvable corpus refines to zero ambiguity.
    if (!cfg.simultaneous_events) {
      CHECK(step1.unresolved.empty());
      auto report = validate(step3.log, Mode::Lax);
      CHECK(report[SpecId::S16].verdict == Verdict::Satisfied);
      CHECK(report[SpecId::S17].verdict == Verdict::Satisfied);
    }
  }
}
