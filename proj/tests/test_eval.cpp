#include "doctest.h"
#include "support.hpp"

#include "bpcheck/eval.hpp"
#include "bpcheck/similarity.hpp"
#include "bpcheck/synthetic.hpp"

#include <algorithm>

using namespace bpcheck;
using testing::trace;

namespace
{

ProcessModel approval_model()
{
    return ProcessModel( "approval", { "create order", "approve order", "reject order" },
                         { { "create order", "approve order" }, { "create order", "reject order" } },
                         { "clerk", "manager" },
                         { { "create order", "clerk" }, { "approve order", "manager" }, { "reject order", "manager" } } );
}

std::vector< ProcessModel > small_collection( std::size_t n, std::uint64_t seed )
{
    std::vector< ProcessModel > out;
    for ( const auto& s : synthetic_collection( n, seed ) )
        out.push_back( s.to_process_model() );
    return out;
}

} // namespace

TEST_CASE( "generate_log: every variant, then cycling up to the minimum" )
{
    const auto model = approval_model();
    const auto log = generate_log( model, 1 );
    REQUIRE( log.traces.size() == 100 );
    CHECK( log.traces[ 0 ].case_id == "approval-0001" );
    std::map< Sequence, std::size_t > counts = variants_of( log );
    CHECK( counts.size() == 2 );
    CHECK( counts.begin()->second == 50 );
    for ( const auto& t : log.traces )
        for ( const auto& e : t.events )
            CHECK( e.role == std::optional< Label >( model.role_map().at( e.activity ) ) );
    CHECK( generate_log( model, 1 ) == log );
}

TEST_CASE( "generate_log: more variants than the minimum" )
{
    std::set< Label > activities;
    std::set< Sequence > sequences;
    for ( int i = 0; i < 150; ++i )
    {
        const auto a = "step " + std::to_string( i );
        activities.insert( a );
        sequences.insert( { a } );
    }
    const ProcessModel model( "wide", activities, sequences, {}, {} );
    const auto log = generate_log( model, 3 );
    CHECK( log.traces.size() == 150 );
    CHECK( variants_of( log ).size() == 150 );
    for ( const auto& t : log.traces )
        CHECK_FALSE( t.events[ 0 ].role.has_value() );
}

TEST_CASE( "inject_noise: zero probability is the identity" )
{
    const auto model = approval_model();
    const auto clean = generate_log( model, 1, 30 );
    const auto noisy = inject_noise( clean, model, 9, { 0.0, 0.5, 10 } );
    CHECK( noisy.log == clean );
    CHECK( noisy.records.empty() );
}

TEST_CASE( "inject_noise: deterministic and bounded" )
{
    const auto model = approval_model();
    const auto clean = generate_log( model, 1, 40 );
    const auto a = inject_noise( clean, model, 4 );
    const auto b = inject_noise( clean, model, 4 );
    CHECK( a.log == b.log );
    CHECK( a.records == b.records );
    CHECK_FALSE( a.records.empty() );
    for ( const auto& r : a.records )
    {
        CHECK_FALSE( r.ops.empty() );
        CHECK( r.ops.size() <= 10 );
        for ( const auto& op : r.ops )
            if ( op.op == Mutation::Op::Insert )
                CHECK( model.activities().contains( op.activity ) );
    }
    for ( const auto& t : a.log.traces )
        CHECK_FALSE( t.events.empty() );
}

TEST_CASE( "apply: each operation" )
{
    auto t = trace( "1", { { "a", "r" }, { "b" }, { "c" } } );
    apply( t, { Mutation::Op::Swap, 0, 2, {}, {} } );
    CHECK( t.activities() == Sequence{ "c", "b", "a" } );
    apply( t, { Mutation::Op::Remove, 1, 0, {}, {} } );
    CHECK( t.activities() == Sequence{ "c", "a" } );
    apply( t, { Mutation::Op::Insert, 2, 0, "d", "s" } );
    CHECK( t.activities() == Sequence{ "c", "a", "d" } );
    CHECK( t.events[ 2 ].role == std::optional< Label >( "s" ) );
    apply( t, { Mutation::Op::ReassignRole, 1, 0, {}, "q" } );
    CHECK( t.events[ 1 ].role == std::optional< Label >( "q" ) );
}

TEST_CASE( "property: replaying the records reproduces the noisy log" )
{
    for ( const auto& s : synthetic_collection( 4, 17 ) )
    {
        const auto model = s.to_process_model();
        const auto clean = generate_log( model, 2, 30 );
        for ( std::uint64_t seed = 0; seed < 10; ++seed )
        {
            const auto noisy = inject_noise( clean, model, seed );
            CHECK( replay( clean, noisy.records ) == noisy.log );
        }
    }
}

TEST_CASE( "ground truth: examples" )
{
    const LabelIndex labels;
    const auto model = approval_model();
    CHECK( ground_truth_violations( model, generate_log( model, 1, 10 ), labels ).empty() );

    const EventLog both{ { trace( "x", { { "create order", "clerk" },
                                         { "approve order", "manager" },
                                         { "reject order", "manager" } } ) } };
    const auto v = ground_truth_violations( model, both, labels );
    CHECK( std::ranges::any_of( v, []( const Violation& x ) {
        return x.constraint.kind == ConstraintKind::Activity && x.constraint.templ == Template::NotCoExistence;
    } ) );

    const EventLog reassigned{ { trace( "y", { { "create order", "clerk" }, { "approve order", "clerk" } } ) } };
    const auto w = ground_truth_violations( model, reassigned, labels );
    REQUIRE( w.size() == 1 );
    CHECK( w.begin()->constraint.kind == ConstraintKind::Role );
    CHECK( w.begin()->constraint.params.first == "approve order" );
    CHECK( w.begin()->constraint.params.second == "manager" );
}

TEST_CASE( "score: examples" )
{
    const ConstraintKey act{ ConstraintKind::Activity, Template::Response, { "", "a", "b" } };
    const ConstraintKey role{ ConstraintKind::Role, Template::Absence, { "", "a", "r" } };
    const auto s = score( { { "1", act }, { "2", act } }, { { "2", act }, { "3", role } } );
    CHECK( s.per_kind.size() == 4 );
    CHECK( s.per_kind.at( ConstraintKind::Activity ) == EvalRecord{ 1, 1, 0 } );
    CHECK( s.per_kind.at( ConstraintKind::Role ) == EvalRecord{ 0, 0, 1 } );
    CHECK( s.overall == EvalRecord{ 1, 1, 1 } );
    CHECK( s.overall.precision() == doctest::Approx( 0.5 ) );
    CHECK_FALSE( s.per_kind.at( ConstraintKind::InterObject ).precision().has_value() );
    CHECK_FALSE( s.per_kind.at( ConstraintKind::InterObject ).recall().has_value() );
}

TEST_CASE( "property: score counts partition detected and truth" )
{
    std::mt19937_64 rng( 5 );
    for ( int i = 0; i < 50; ++i )
    {
        std::set< Violation > detected, truth;
        for ( int j = 0; j < 8; ++j )
        {
            const Violation v{ "c" + std::to_string( rng() % 4 ), testing::random_key( rng ) };
            if ( rng() % 2 )
                detected.insert( v );
            if ( rng() % 2 )
                truth.insert( v );
        }
        const auto s = score( detected, truth );
        CHECK( s.overall.tp + s.overall.fp == detected.size() );
        CHECK( s.overall.tp + s.overall.fn == truth.size() );
        CHECK( score( truth, truth ).overall.recall().value_or( 1.0 ) == 1.0 );
    }
}

TEST_CASE( "cross_validate: leave-one-out on a small collection" )
{
    const LabelIndex labels;
    const LexicalSimilarity provider;
    const auto models = small_collection( 4, 3 );
    CrossValidationOptions opts;
    opts.folds = 4;
    opts.seed = 8;
    opts.min_traces = 20;
    const auto rows = cross_validate( models, opts, provider, labels );
    CHECK( rows.size() == 4 * 4 * 5 );
    std::map< std::string, std::set< std::size_t > > folds;
    for ( const auto& r : rows )
        folds[ r.model_id ].insert( r.fold );
    CHECK( folds.size() == 4 );
    for ( const auto& [ id, f ] : folds )
        CHECK( f.size() == 1 );
    CHECK( cross_validate( models, opts, provider, labels ) == rows );

    const auto summary = summarize( rows );
    CHECK( summary.size() == 4 * 5 );
    for ( const auto& s : summary )
        CHECK( s.logs == 4 );

    opts.folds = 5;
    CHECK_THROWS_AS( (void)cross_validate( models, opts, provider, labels ), std::invalid_argument );
}

TEST_CASE( "derive_seed and settings" )
{
    CHECK( derive_seed( 1, "a" ) == derive_seed( 1, "a" ) );
    CHECK( derive_seed( 1, "a" ) != derive_seed( 1, "b" ) );
    CHECK( derive_seed( 1, "a" ) != derive_seed( 2, "a" ) );
    const auto s = default_eval_settings();
    REQUIRE( s.size() == 4 );
    for ( const auto& x : s )
        CHECK( x.omega == doctest::Approx( 0.9 ) );
}
