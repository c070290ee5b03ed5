#include "support.hpp"

#include "bpcheck/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <unistd.h>

namespace testing
{

std::filesystem::path source_path( const std::string& relative )
{
    return std::filesystem::path( BPCHECK_SOURCE_DIR ) / relative;
}

bpcheck::Trace trace( std::string case_id, std::initializer_list< E > events )
{
    bpcheck::Trace t{ std::move( case_id ), {} };
    for ( const auto& e : events )
        t.events.emplace_back( e.activity, e.role ? std::optional< std::string_view >( e.role ) : std::nullopt );
    return t;
}

TempDir::TempDir( const std::string& tag )
{
    static std::atomic< int > counter{ 0 };
    _path = std::filesystem::temp_directory_path() /
            ( "bpcheck-" + tag + "-" + std::to_string( ::getpid() ) + "-" + std::to_string( counter++ ) );
    std::filesystem::remove_all( _path );
    std::filesystem::create_directories( _path );
}

TempDir::~TempDir()
{
    std::error_code ec;
    std::filesystem::remove_all( _path, ec );
}

std::vector< bool > brute_activatable( const std::vector< bpcheck::TemplateInstance >& group, std::size_t max_len )
{
    std::set< Label > symbols{ "zz-unrelated" };
    for ( const auto& c : group )
    {
        symbols.insert( c.first );
        if ( bpcheck::arity( c.templ ) == 2 )
            symbols.insert( c.second );
    }
    const std::vector< Label > alphabet( symbols.begin(), symbols.end() );
    std::vector< bool > out( group.size(), false );
    for ( const auto& w : bpcheck::oracle::all_words( alphabet, max_len ) )
    {
        if ( w.empty() )
            continue;
        const bool all = std::ranges::all_of(
            group, [ & ]( const auto& c ) { return bpcheck::oracle::satisfies( c.templ, c.first, c.second, w ); } );
        if ( !all )
            continue;
        for ( std::size_t k = 0; k < group.size(); ++k )
            out[ k ] = out[ k ] || bpcheck::oracle::activated( group[ k ].templ, group[ k ].first, group[ k ].second, w );
    }
    return out;
}

bool brute_minable( bpcheck::Template t, const Label& a, const Label& b, const std::set< Sequence >& sequences )
{
    bool activated = false;
    for ( const auto& s : sequences )
    {
        if ( !bpcheck::oracle::satisfies( t, a, b, s ) )
            return false;
        activated = activated || bpcheck::oracle::activated( t, a, b, s );
    }
    return activated;
}

std::vector< bpcheck::TemplateInstance > random_group( std::mt19937_64& rng, std::size_t size,
                                                       const std::vector< Label >& symbols )
{
    std::uniform_int_distribution< std::size_t > pick_template( 0, bpcheck::all_templates.size() - 1 );
    std::uniform_int_distribution< std::size_t > pick_symbol( 0, symbols.size() - 1 );
    std::vector< bpcheck::TemplateInstance > group;
    while ( group.size() < size )
    {
        const auto t = bpcheck::all_templates[ pick_template( rng ) ];
        const auto a = symbols[ pick_symbol( rng ) ];
        auto b = symbols[ pick_symbol( rng ) ];
        if ( bpcheck::arity( t ) == 1 )
            b.clear();
        else if ( a == b )
            continue;
        bpcheck::TemplateInstance c{ t, a, b };
        if ( std::ranges::find( group, c ) == group.end() )
            group.push_back( std::move( c ) );
    }
    return group;
}

} // namespace testing

namespace testing
{

namespace
{

std::size_t below( std::mt19937_64& rng, std::size_t n ) { return std::uniform_int_distribution< std::size_t >( 0, n - 1 )( rng ); }

} // namespace

Label random_label( std::mt19937_64& rng )
{
    static const std::vector< std::string > words{ "order",   "invoice", "goods",  "\"quoted\"", "a,b",    "münchen",
                                                   "approve", "check",   "x",      "back\\slash", "tab-free", "o'neil",
                                                   "señor",   "receipt", "ship",   "{brace}",    "née",    "line" };
    Label out;
    const auto n = 1 + below( rng, 3 );
    for ( std::size_t i = 0; i < n; ++i )
        out += ( i ? " " : "" ) + words[ below( rng, words.size() ) ];
    return bpcheck::normalize_label( out );
}

bpcheck::ConstraintKey random_key( std::mt19937_64& rng )
{
    using namespace bpcheck;
    for ( ;; )
    {
        const auto kind = all_kinds[ below( rng, all_kinds.size() ) ];
        const auto t = all_templates[ below( rng, all_templates.size() ) ];
        if ( !template_allowed( kind, t ) )
            continue;
        ConstraintParams p{ kind == ConstraintKind::IntraObject ? random_label( rng ) : "", random_label( rng ),
                            random_label( rng ) };
        if ( kind == ConstraintKind::IntraObject && arity( t ) == 1 )
            p.second.clear();
        try
        {
            return MinedConstraint( kind, t, p ).key();
        }
        catch ( const ModelError& )
        {
        }
    }
}

bpcheck::ConstraintCollection random_collection( std::mt19937_64& rng )
{
    bpcheck::ConstraintCollection c;
    const auto n = below( rng, 12 );
    for ( std::size_t i = 0; i < n; ++i )
    {
        std::set< std::string > ids;
        const auto support = 1 + below( rng, 4 );
        while ( ids.size() < support )
            ids.insert( "m" + std::to_string( below( rng, 30 ) ) );
        c.add( random_key( rng ), ids );
    }
    return c;
}

bpcheck::RunInfo random_info( std::mt19937_64& rng )
{
    bpcheck::RunInfo info;
    info.seed = rng();
    const auto n = below( rng, 4 );
    for ( std::size_t i = 0; i < n; ++i )
        info.config[ random_label( rng ) ] = random_label( rng );
    return info;
}

bpcheck::ViolationReport random_report( std::mt19937_64& rng )
{
    bpcheck::ViolationReport r;
    r.traces = below( rng, 50 );
    for ( auto k : bpcheck::all_kinds )
        r.totals[ std::string( bpcheck::to_string( k ) ) ] = below( rng, 20 );
    const auto n = below( rng, 6 );
    for ( std::size_t i = 0; i < n; ++i )
    {
        bpcheck::ViolationGroup g;
        g.constraint = random_key( rng );
        g.explanation = "Each " + random_label( rng ) + " must be checked.";
        std::set< std::string > cases;
        const auto count = 1 + below( rng, 5 );
        while ( cases.size() < count )
            cases.insert( "case-" + std::to_string( below( rng, 100 ) ) );
        g.case_ids.assign( cases.begin(), cases.end() );
        g.count = g.case_ids.size();
        r.groups.push_back( std::move( g ) );
    }
    r.config = random_info( rng ).config;
    r.config[ "seed" ] = std::to_string( rng() );
    return r;
}

bpcheck::ReviewFilter random_filter( std::mt19937_64& rng )
{
    bpcheck::ReviewFilter f;
    for ( auto* set : { &f.objects, &f.actions, &f.activities, &f.roles } )
    {
        const auto n = below( rng, 4 );
        for ( std::size_t i = 0; i < n; ++i )
            set->insert( random_label( rng ) );
    }
    const auto pins = below( rng, 4 );
    for ( std::size_t i = 0; i < pins; ++i )
        f.pinned.insert( random_key( rng ).str() );
    return f;
}

bpcheck::SelectedSet random_selected( std::mt19937_64& rng )
{
    bpcheck::SelectedSet s;
    const auto n = below( rng, 6 );
    for ( std::size_t i = 0; i < n; ++i )
    {
        bpcheck::FittedConstraint c;
        c.source = random_key( rng );
        c.key = c.source;
        c.support = static_cast< std::uint32_t >( 1 + below( rng, 9 ) );
        const auto m = below( rng, 3 );
        for ( std::size_t j = 0; j < m; ++j )
            c.sim.push_back( { random_label( rng ), random_label( rng ),
                               std::uniform_real_distribution< double >( 0.5, 1.0 )( rng ) } );
        c.relevance = std::uniform_real_distribution< double >( 0.0, 1.0 )( rng );
        s.constraints.push_back( std::move( c ) );
    }
    if ( below( rng, 2 ) )
        s.removed.push_back( random_key( rng ) );
    if ( below( rng, 2 ) )
        s.diagnostics.push_back( "unresolved activity group: " + random_label( rng ) );
    s.info = random_info( rng );
    return s;
}

} // namespace testing
