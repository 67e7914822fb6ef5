#include <gtest/gtest.h>

#include <chrono>
#include <set>

#include "bclab/identities.hpp"

using namespace bclab;

namespace {

CouplingSet random_couplings(Rng& r)
{
    CouplingSet c;
    for (auto& x : c.nu)
        x = r.box(1.0);
    return c;
}

} // namespace

TEST(IdentityTable, TagsAreUniqueAndRoundTrip)
{
    std::set<std::string_view> seen;
    for (const auto& info : identity_table()) {
        EXPECT_TRUE(seen.insert(info.tag).second) << info.tag;
        EXPECT_FALSE(info.statement.empty());
        ASSERT_TRUE(identity_from_tag(info.tag).has_value());
        EXPECT_EQ(*identity_from_tag(info.tag), info.id);
    }
    EXPECT_FALSE(identity_from_tag("A99").has_value());
}

TEST(IdentityTable, WrongEntryPointThrows)
{
    const Torus t(I);
    EXPECT_THROW(verify_identity(IdentityId::A50, 1, 1, t), std::invalid_argument);
    EXPECT_THROW(evaluate_v_identity(IdentityId::A19, 1, 1, {}, {}, t), std::invalid_argument);
}

// every tag at 100 points on two tori, all within 1e-10 and well under the 20 s budget
TEST(IdentityBattery, AllTagsPassAtHundredPoints)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (cplx tau : {cplx{0.0, 1.0}, cplx{0.27, 0.91}}) {
        const Torus t(tau);
        Rng r(99);
        const CouplingSet nu = random_couplings(r), nb = random_couplings(r);
        for (const auto& info : identity_table()) {
            const VerificationRecord rec = info.uses_couplings
                ? evaluate_v_identity(info.id, 100, 42, nu, nb, t)
                : verify_identity(info.id, 100, 42, t);
            EXPECT_TRUE(rec.pass) << info.tag << " residual " << rec.max_residual;
            EXPECT_EQ(rec.accepted, 100) << info.tag;
            EXPECT_LE(rec.accepted, rec.attempted);
            EXPECT_LE(rec.max_residual, 1e-10) << info.tag;
        }
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 20.0);
}

TEST(IdentityBattery, NamedExamples)
{
    const Torus t(I);
    EXPECT_LE(verify_identity(IdentityId::A19, 100, 1, t).max_residual, 1e-11);
    EXPECT_TRUE(verify_identity(IdentityId::A26, 100, 1, t).pass);
    EXPECT_TRUE(verify_identity(IdentityId::A59, 100, 1, t).pass);
    Rng r(4);
    const CouplingSet nu = random_couplings(r), nb = random_couplings(r);
    for (IdentityId id : {IdentityId::A50, IdentityId::W370, IdentityId::VBARV2})
        EXPECT_TRUE(evaluate_v_identity(id, 100, 1, nu, nb, t).pass);
}

TEST(IdentityBattery, ZeroToleranceFails)
{
    const Torus t(I);
    const auto rec = verify_identity(IdentityId::A34, 10, 1, t, 0.0);
    EXPECT_FALSE(rec.pass);
    EXPECT_GT(rec.max_residual, 0.0);
}

TEST(IdentityBattery, SeedDeterminesRecord)
{
    const Torus t(cplx{0.1, 1.2});
    const auto a = verify_identity(IdentityId::A15, 20, 5, t);
    const auto b = verify_identity(IdentityId::A15, 20, 5, t);
    EXPECT_EQ(a.max_residual, b.max_residual);
    EXPECT_EQ(a.attempted, b.attempted);
}
