#include "bpcheck/eval.hpp"

#include "bpcheck/checker.hpp"
#include "bpcheck/miner.hpp"
#include "bpcheck/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

namespace bpcheck
{

namespace
{

std::size_t uniform( std::mt19937_64& rng, std::size_t n )
{
    return std::uniform_int_distribution< std::size_t >( 0, n - 1 )( rng );
}

bool coin( std::mt19937_64& rng, double p ) { return p > 0.0 && std::bernoulli_distribution( std::min( p, 1.0 ) )( rng ); }

std::string case_id( const std::string& model_id, std::size_t i )
{
    char buf[ 16 ];
    std::snprintf( buf, sizeof buf, "%04zu", i );
    return model_id + "-" + buf;
}

std::optional< Label > mapped_role( const ProcessModel& model, const Label& activity )
{
    if ( const auto it = model.role_map().find( activity ); it != model.role_map().end() )
        return it->second;
    return std::nullopt;
}

// Draws an operation applicable to `trace`, or nothing if the draw must be repeated.
std::optional< Mutation > draw( std::mt19937_64& rng, const Trace& trace, const ProcessModel& model,
                                const std::vector< Label >& activities, const std::vector< std::optional< Label > >& roles )
{
    const auto n = trace.events.size();
    Mutation m;
    m.op = static_cast< Mutation::Op >( uniform( rng, 4 ) );
    switch ( m.op )
    {
    case Mutation::Op::Insert:
        if ( activities.empty() )
            return std::nullopt;
        m.pos = uniform( rng, n + 1 );
        m.activity = activities[ uniform( rng, activities.size() ) ];
        m.role = mapped_role( model, m.activity );
        return m;
    case Mutation::Op::Remove:
        if ( n < 2 )
            return std::nullopt;
        m.pos = uniform( rng, n );
        return m;
    case Mutation::Op::Swap:
        if ( n < 2 )
            return std::nullopt;
        m.pos = uniform( rng, n );
        m.other = uniform( rng, n - 1 );
        if ( m.other >= m.pos )
            ++m.other;
        return m;
    case Mutation::Op::ReassignRole: {
        if ( n == 0 )
            return std::nullopt;
        m.pos = uniform( rng, n );
        std::vector< std::optional< Label > > options;
        for ( const auto& r : roles )
            if ( r != trace.events[ m.pos ].role )
                options.push_back( r );
        if ( options.empty() )
            return std::nullopt;
        m.role = options[ uniform( rng, options.size() ) ];
        return m;
    }
    }
    return std::nullopt;
}

} // namespace

std::uint64_t derive_seed( std::uint64_t seed, std::string_view tag )
{
    std::uint64_t h = 1469598103934665603ULL;
    for ( unsigned char c : tag )
        h = ( h ^ c ) * 1099511628211ULL;
    std::uint64_t z = seed ^ h;
    z += 0x9e3779b97f4a7c15ULL;
    z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ULL;
    z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebULL;
    return z ^ ( z >> 31 );
}

EventLog generate_log( const ProcessModel& model, std::uint64_t seed, std::size_t min_traces )
{
    const std::vector< Sequence > variants( model.sequences().begin(), model.sequences().end() );
    if ( variants.empty() )
        throw ModelError( "model '" + model.id() + "' has no execution sequences" );

    const auto make_trace = [ & ]( const Sequence& seq, std::size_t i ) {
        Trace t{ case_id( model.id(), i ), {} };
        for ( const auto& a : seq )
        {
            const auto role = mapped_role( model, a );
            t.events.emplace_back( a, role ? std::optional< std::string_view >( *role ) : std::nullopt );
        }
        return t;
    };

    EventLog log;
    for ( const auto& v : variants )
        log.traces.push_back( make_trace( v, log.traces.size() + 1 ) );

    std::vector< std::size_t > order( variants.size() );
    std::iota( order.begin(), order.end(), 0 );
    std::mt19937_64 rng( seed );
    std::shuffle( order.begin(), order.end(), rng );
    for ( std::size_t i = 0; log.traces.size() < min_traces; ++i )
        log.traces.push_back( make_trace( variants[ order[ i % order.size() ] ], log.traces.size() + 1 ) );
    return log;
}

void apply( Trace& trace, const Mutation& m )
{
    auto& ev = trace.events;
    const auto check = [ & ]( std::size_t pos, std::size_t limit ) {
        if ( pos >= limit )
            throw std::out_of_range( "mutation position " + std::to_string( pos ) + " out of range in case " +
                                     trace.case_id );
    };
    switch ( m.op )
    {
    case Mutation::Op::Insert:
        check( m.pos, ev.size() + 1 );
        ev.insert( ev.begin() + static_cast< std::ptrdiff_t >( m.pos ),
                   Event( m.activity, m.role ? std::optional< std::string_view >( *m.role ) : std::nullopt ) );
        break;
    case Mutation::Op::Remove:
        check( m.pos, ev.size() );
        ev.erase( ev.begin() + static_cast< std::ptrdiff_t >( m.pos ) );
        break;
    case Mutation::Op::Swap:
        check( m.pos, ev.size() );
        check( m.other, ev.size() );
        std::swap( ev[ m.pos ], ev[ m.other ] );
        break;
    case Mutation::Op::ReassignRole:
        check( m.pos, ev.size() );
        ev[ m.pos ].role = m.role;
        break;
    }
}

NoisyLog inject_noise( const EventLog& log, const ProcessModel& model, std::uint64_t seed, const NoiseOptions& opts )
{
    const std::vector< Label > activities( model.activities().begin(), model.activities().end() );
    std::vector< std::optional< Label > > roles{ std::nullopt };
    roles.insert( roles.end(), model.roles().begin(), model.roles().end() );

    NoisyLog out{ log, {} };
    std::mt19937_64 rng( seed );
    for ( auto& trace : out.log.traces )
    {
        if ( !coin( rng, opts.p_trace ) )
            continue;
        MutationRecord record{ trace.case_id, {} };
        do
        {
            std::optional< Mutation > m;
            for ( int attempt = 0; !m && attempt < 1000; ++attempt )
                m = draw( rng, trace, model, activities, roles );
            if ( !m )
                break;
            apply( trace, *m );
            record.ops.push_back( std::move( *m ) );
        } while ( record.ops.size() < opts.max_ops && coin( rng, opts.p_repeat ) );
        if ( !record.ops.empty() )
            out.records.push_back( std::move( record ) );
    }
    return out;
}

EventLog replay( const EventLog& clean, const std::vector< MutationRecord >& records )
{
    EventLog out = clean;
    std::map< std::string, const MutationRecord* > by_case;
    for ( const auto& r : records )
        by_case[ r.case_id ] = &r;
    for ( auto& t : out.traces )
        if ( const auto it = by_case.find( t.case_id ); it != by_case.end() )
            for ( const auto& m : it->second->ops )
                apply( t, m );
    return out;
}

std::vector< ConstraintKey > model_constraints( const ProcessModel& model, const LabelIndex& labels )
{
    ConstraintCollection raw;
    for ( const auto& c : mine_model( model, labels ) )
        raw.add( c.key(), model.id() );
    const auto pruned = prune_subsumed( raw );
    std::vector< ConstraintKey > out;
    for ( const auto& [ key, ids ] : pruned.entries() )
        out.push_back( key );
    return out;
}

std::set< Violation > standardized( const std::set< Violation >& violations, const Lexicon& lex )
{
    std::set< Violation > out;
    for ( const auto& v : violations )
        out.insert( { v.case_id, standardize_key( v.constraint, lex ).value_or( v.constraint ) } );
    return out;
}

std::set< Violation > ground_truth_violations( const ProcessModel& model, const EventLog& log, const LabelIndex& labels,
                                               unsigned jobs )
{
    return standardized( check_log( log, model_constraints( model, labels ), labels, jobs ), labels.lexicon() );
}

std::optional< double > EvalRecord::precision() const
{
    if ( tp + fp == 0 )
        return std::nullopt;
    return static_cast< double >( tp ) / static_cast< double >( tp + fp );
}

std::optional< double > EvalRecord::recall() const
{
    if ( tp + fn == 0 )
        return std::nullopt;
    return static_cast< double >( tp ) / static_cast< double >( tp + fn );
}

EvalScores score( const std::set< Violation >& detected, const std::set< Violation >& truth )
{
    EvalScores out;
    for ( ConstraintKind k : all_kinds )
        out.per_kind[ k ] = {};
    for ( const auto& d : detected )
    {
        auto& r = out.per_kind[ d.constraint.kind ];
        if ( truth.contains( d ) )
            ++r.tp;
        else
            ++r.fp;
    }
    for ( const auto& t : truth )
        if ( !detected.contains( t ) )
            ++out.per_kind[ t.constraint.kind ].fn;
    for ( const auto& [ k, r ] : out.per_kind )
    {
        out.overall.tp += r.tp;
        out.overall.fp += r.fp;
        out.overall.fn += r.fn;
    }
    return out;
}

SelectionConfig EvalSetting::selection( const SelectionConfig& base ) const
{
    SelectionConfig c = base;
    c.omega = omega;
    if ( k )
        c.use_top_k( *k );
    else if ( tau )
        c.use_threshold( *tau );
    return c;
}

std::vector< EvalSetting > default_eval_settings()
{
    return { { std::nullopt, 0.5, 0.9 }, { std::nullopt, 0.8, 0.9 }, { 10, std::nullopt, 0.9 }, { 100, std::nullopt, 0.9 } };
}

std::vector< MetricsRow > cross_validate( const std::vector< ProcessModel >& models, const CrossValidationOptions& opts,
                                          const SimilarityProvider& provider, const LabelIndex& labels )
{
    if ( opts.folds < 1 || models.size() < opts.folds )
        throw std::invalid_argument( "cross-validation needs at least as many models as folds" );
    for ( const auto& s : opts.settings )
    {
        if ( s.k.has_value() == s.tau.has_value() )
            throw std::invalid_argument( "each evaluation setting needs exactly one of k and tau" );
        s.selection( opts.base ).validate();
    }

    std::vector< std::size_t > order( models.size() );
    std::iota( order.begin(), order.end(), 0 );
    std::mt19937_64 rng( derive_seed( opts.seed, "folds" ) );
    std::shuffle( order.begin(), order.end(), rng );
    std::vector< std::size_t > fold_of( models.size() );
    for ( std::size_t i = 0; i < order.size(); ++i )
        fold_of[ order[ i ] ] = i % opts.folds;

    std::vector< MetricsRow > rows;
    for ( std::size_t fold = 0; fold < opts.folds; ++fold )
    {
        std::vector< ProcessModel > training;
        std::vector< const ProcessModel* > held_out;
        for ( std::size_t i = 0; i < models.size(); ++i )
        {
            if ( fold_of[ i ] == fold )
                held_out.push_back( &models[ i ] );
            else
                training.push_back( models[ i ] );
        }
        const auto mined = mine_collection( training, labels, opts.jobs ).constraints();

        std::vector< std::vector< MetricsRow > > per_model( held_out.size() );
        parallel_for( held_out.size(), opts.jobs, [ & ]( std::size_t i ) {
            const auto& model = *held_out[ i ];
            const auto clean = generate_log( model, derive_seed( opts.seed, "log/" + model.id() ), opts.min_traces );
            const auto noisy = inject_noise( clean, model, derive_seed( opts.seed, "noise/" + model.id() ), opts.noise );
            const auto truth = ground_truth_violations( model, noisy.log, labels );
            const auto fitted = fit_constraints( mined, noisy.log, opts.base, provider, labels );

            for ( const auto& setting : opts.settings )
            {
                const auto config = setting.selection( opts.base );
                auto scored = fitted;
                score_relevance( scored, config.omega );
                const auto repaired = ensure_consistency( select( scored, config ), config, {} );
                const auto detected =
                    standardized( check_log( noisy.log, keys_of( repaired.constraints ), labels ), labels.lexicon() );
                const auto scores = score( detected, truth );
                for ( const auto& [ kind, record ] : scores.per_kind )
                    per_model[ i ].push_back( { fold, model.id(), std::string( to_string( kind ) ), setting, record } );
                per_model[ i ].push_back( { fold, model.id(), "all", setting, scores.overall } );
            }
        } );
        for ( auto& r : per_model )
            rows.insert( rows.end(), r.begin(), r.end() );
    }
    return rows;
}

std::vector< SummaryRow > summarize( const std::vector< MetricsRow >& rows )
{
    std::vector< EvalSetting > settings;
    for ( const auto& r : rows )
        if ( std::find( settings.begin(), settings.end(), r.setting ) == settings.end() )
            settings.push_back( r.setting );

    std::vector< std::string > kinds;
    for ( ConstraintKind k : all_kinds )
        kinds.emplace_back( to_string( k ) );
    kinds.emplace_back( "all" );

    std::vector< SummaryRow > out;
    for ( const auto& s : settings )
        for ( const auto& kind : kinds )
        {
            SummaryRow sum;
            sum.kind = kind;
            sum.setting = s;
            double precision = 0, recall = 0;
            std::size_t n_precision = 0, n_recall = 0;
            for ( const auto& r : rows )
            {
                if ( !( r.setting == s ) || r.kind != kind )
                    continue;
                ++sum.logs;
                sum.tp += static_cast< double >( r.record.tp );
                sum.fp += static_cast< double >( r.record.fp );
                sum.fn += static_cast< double >( r.record.fn );
                if ( auto p = r.record.precision() )
                {
                    precision += *p;
                    ++n_precision;
                }
                else
                    ++sum.undefined_precision;
                if ( auto rc = r.record.recall() )
                {
                    recall += *rc;
                    ++n_recall;
                }
            }
            if ( sum.logs == 0 )
                continue;
            const auto logs = static_cast< double >( sum.logs );
            sum.tp /= logs;
            sum.fp /= logs;
            sum.fn /= logs;
            if ( n_precision )
                sum.precision = precision / static_cast< double >( n_precision );
            if ( n_recall )
                sum.recall = recall / static_cast< double >( n_recall );
            out.push_back( std::move( sum ) );
        }
    return out;
}

} // namespace bpcheck
