#include <doctest.h>

#include <algorithm>
#include <random>

#include "ncbcast/knowledge.hpp"
#include "oracles.hpp"

using namespace ncbcast;
using oracle::vec;

namespace {

ReceiverState state_from(std::initializer_list<CoeffVector> vectors) {
    ReceiverState st(1);
    for (const auto& v : vectors) st.receive(v);
    return st;
}

std::vector<PacketId> ground_upto(PacketId n) {
    std::vector<PacketId> g;
    for (PacketId p = 1; p <= n; ++p) g.push_back(p);
    return g;
}

}  // namespace

TEST_CASE("receive reports innovation") {
    ReceiverState st(1);
    auto r1 = st.receive(vec({{3, 1}}));
    CHECK(r1.innovative);
    CHECK(st.rank() == 1);
    CHECK(st.decoded(3));

    ReceiverState st2 = state_from({vec({{1, 1}})});
    CHECK_FALSE(st2.receive(vec({{1, 2}})).innovative);  // scalar multiple

    ReceiverState st3 = state_from({vec({{1, 1}, {2, 1}})});
    auto r3 = st3.receive(vec({{2, 1}, {3, 1}}));
    CHECK(r3.innovative);
    CHECK(st3.rank() == 2);
}

TEST_CASE("decoded set from unit rows only") {
    CHECK(state_from({vec({{1, 1}}), vec({{2, 1}})}).decoded_set() ==
          std::set<PacketId>{1, 2});
    // a single mixed row decodes nothing: span is {0, (1,1), (2,2)}
    CHECK(state_from({vec({{1, 1}, {2, 1}})}).decoded_set().empty());
    // reduction of (1,1),(0,1) yields unit rows for both packets
    ReceiverState st = state_from({vec({{1, 1}, {2, 1}}), vec({{2, 1}})});
    CHECK(st.decoded_set() == std::set<PacketId>{1, 2});
    CHECK(st.basis().rows() == std::vector<CoeffVector>{vec({{1, 1}}), vec({{2, 1}})});
}

TEST_CASE("heard set is the union of row supports") {
    CHECK(state_from({vec({{1, 1}, {2, 1}})}).heard_set() == std::set<PacketId>{1, 2});
    CHECK(ReceiverState(1).heard_set().empty());
    ReceiverState st = state_from({vec({{1, 1}, {3, 2}}), vec({{2, 1}, {3, 1}})});
    CHECK(st.heard_set() == std::set<PacketId>{1, 2, 3});
    // cross-check against the full span: hearing is preserved under combination
    CHECK(oracle::heard(oracle::enumerate_span(st.basis().rows())) ==
          std::set<PacketId>{1, 2, 3});
}

TEST_CASE("seen set equals pivots and the definitional oracle") {
    ReceiverState a = state_from({vec({{1, 1}, {2, 1}})});
    CHECK(a.seen_set() == std::set<PacketId>{1});
    CHECK(oracle::seen(oracle::enumerate_span(a.basis().rows())) == std::set<PacketId>{1});

    ReceiverState b = state_from({vec({{2, 1}})});
    CHECK(b.seen_set() == std::set<PacketId>{2});  // decoded implies seen

    ReceiverState c = state_from({vec({{1, 1}, {3, 2}}), vec({{2, 1}, {3, 1}})});
    CHECK(c.seen_set() == std::set<PacketId>{1, 2});
    CHECK(oracle::seen(oracle::enumerate_span(c.basis().rows())) ==
          std::set<PacketId>{1, 2});
}

TEST_CASE("class partition groups pairwise-known combinations") {
    ReceiverState st = state_from({vec({{1, 1}, {2, 1}})});
    auto part = class_partition(st, ground_upto(2));
    CHECK(part.decoded_class.empty());
    REQUIRE(part.classes.size() == 1);
    CHECK(part.classes[0] == std::vector<PacketId>{1, 2});
    CHECK(part.deficit == 1);
}

TEST_CASE("class partition puts decoded packets with the zero packet") {
    ReceiverState st = state_from({vec({{1, 1}}), vec({{2, 1}})});
    auto part = class_partition(st, ground_upto(2));
    CHECK(part.decoded_class == std::vector<PacketId>{1, 2});
    CHECK(part.classes.empty());
    CHECK(part.deficit == 0);
}

TEST_CASE("class partition separates unrelated pairs") {
    ReceiverState st = state_from({vec({{1, 1}, {2, 1}}), vec({{3, 1}, {4, 2}})});
    auto part = class_partition(st, ground_upto(4));
    CHECK(part.decoded_class.empty());
    REQUIRE(part.classes.size() == 2);
    CHECK(part.classes[0] == std::vector<PacketId>{1, 2});
    CHECK(part.classes[1] == std::vector<PacketId>{3, 4});
    CHECK(part.deficit == 2);
    // cross pairs are not related
    CHECK_FALSE(st.in_span(vec({{1, 1}, {3, 1}})));
    CHECK_FALSE(st.in_span(vec({{1, 1}, {3, 2}})));
}

TEST_CASE("partition respects the ground set") {
    ReceiverState st = state_from({vec({{1, 1}, {2, 1}})});
    auto part = class_partition(st, {1});
    CHECK(part.decoded_class.empty());
    REQUIRE(part.classes.size() == 1);
    CHECK(part.classes[0] == std::vector<PacketId>{1});  // partner outside ground
    CHECK(part.deficit == 0);
}

TEST_CASE("deficit counts nontrivial classes") {
    CHECK(deficit(ReceiverState(1), ground_upto(4)) == 0);
    CHECK(deficit(state_from({vec({{1, 1}, {2, 1}})}), ground_upto(2)) == 1);
    CHECK(deficit(state_from({vec({{1, 1}}), vec({{2, 1}})}), ground_upto(2)) == 0);
}

TEST_CASE("seen count equals rank with nesting decoded within seen within heard") {
    std::mt19937_64 rng(808);
    for (int iter = 0; iter < 80; ++iter) {
        ReceiverState st = oracle::random_state(rng, 10, 8);
        auto seen = st.seen_set();
        CHECK(seen.size() == st.rank());
        auto decoded = st.decoded_set();
        auto heard = st.heard_set();
        CHECK(std::includes(seen.begin(), seen.end(), decoded.begin(), decoded.end()));
        CHECK(std::includes(heard.begin(), heard.end(), seen.begin(), seen.end()));
    }
}

TEST_CASE("union-find partition equals the brute-force span partition") {
    std::mt19937_64 rng(909);
    auto ground = ground_upto(10);
    for (int iter = 0; iter < 80; ++iter) {
        ReceiverState st = oracle::random_state(rng, 10, 8);
        auto expected = oracle::partition(oracle::enumerate_span(st.basis().rows()), ground);
        auto got = class_partition(st, ground);
        CHECK(got.decoded_class == expected.decoded_class);
        CHECK(got.classes == expected.classes);
        CHECK(got.deficit == expected.deficit);
        // the zero-packet class is exactly the decoded set
        std::set<PacketId> dc(got.decoded_class.begin(), got.decoded_class.end());
        CHECK(dc == st.decoded_set());
    }
}

TEST_CASE("revealing one packet of a class decodes the entire class") {
    ReceiverState st = state_from({vec({{1, 1}, {2, 1}})});
    st.receive(vec({{1, 1}}));
    CHECK(st.decoded_set() == std::set<PacketId>{1, 2});

    std::mt19937_64 rng(1010);
    int exercised = 0;
    for (int iter = 0; iter < 200 && exercised < 40; ++iter) {
        ReceiverState base = oracle::random_state(rng, 8, 6);
        auto part = class_partition(base, ground_upto(8));
        for (const auto& cls : part.classes) {
            if (cls.size() < 2) continue;
            ++exercised;
            ReceiverState st2 = base;
            st2.receive(CoeffVector::unit(cls[iter % cls.size()]));
            for (PacketId p : cls) CHECK(st2.decoded(p));
        }
    }
    CHECK(exercised > 0);
}

TEST_CASE("oldest heard-undecoded tracks the mixed set") {
    ReceiverState st(2);
    CHECK_FALSE(st.oldest_heard_undecoded().has_value());
    st.receive(vec({{2, 1}, {3, 1}}));
    REQUIRE(st.oldest_heard_undecoded().has_value());
    CHECK(*st.oldest_heard_undecoded() == 2);
    CHECK(st.heard_undecoded() == std::set<PacketId>{2, 3});
    st.receive(vec({{3, 1}}));
    CHECK_FALSE(st.oldest_heard_undecoded().has_value());  // both decoded now
    CHECK(st.decoded_set() == std::set<PacketId>{2, 3});
}
