#include "bpcheck/io.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bpcheck
{

using nlohmann::json;

std::string read_text( const std::filesystem::path& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw DataError( "cannot read " + path.string() );
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text( const std::filesystem::path& path, const std::string& content )
{
    if ( path.has_parent_path() )
        std::filesystem::create_directories( path.parent_path() );
    std::ofstream out( path, std::ios::binary );
    if ( !out || !( out << content ) )
        throw DataError( "cannot write " + path.string() );
}

// ---------------------------------------------------------------------------------------------
// CSV

std::vector< std::vector< std::string > > parse_csv( const std::string& text, const std::string& source )
{
    std::vector< std::vector< std::string > > rows;
    std::vector< std::string > row;
    std::string field;
    bool quoted = false, field_started = false;
    std::size_t line = 1, quote_line = 0;

    const auto end_field = [ & ] {
        row.push_back( std::move( field ) );
        field.clear();
        field_started = false;
    };
    const auto end_row = [ & ] {
        end_field();
        if ( !( row.size() == 1 && row[ 0 ].empty() ) )
            rows.push_back( std::move( row ) );
        row.clear();
    };

    for ( std::size_t i = 0; i < text.size(); ++i )
    {
        const char c = text[ i ];
        if ( quoted )
        {
            if ( c == '"' )
            {
                if ( i + 1 < text.size() && text[ i + 1 ] == '"' )
                {
                    field.push_back( '"' );
                    ++i;
                }
                else
                    quoted = false;
            }
            else
            {
                if ( c == '\n' )
                    ++line;
                field.push_back( c );
            }
            continue;
        }
        switch ( c )
        {
        case '"':
            if ( field_started )
                throw DataError( source + ":" + std::to_string( line ) + ": stray quote inside unquoted field" );
            quoted = true;
            field_started = true;
            quote_line = line;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            break;
        case '\n':
            end_row();
            ++line;
            break;
        default:
            field.push_back( c );
            field_started = true;
        }
    }
    if ( quoted )
        throw DataError( source + ":" + std::to_string( quote_line ) + ": unterminated quoted field" );
    if ( field_started || !row.empty() )
        end_row();
    return rows;
}

namespace
{

std::string csv_field( const std::string& s )
{
    if ( s.find_first_of( ",\"\n\r" ) == std::string::npos )
        return s;
    std::string out = "\"";
    for ( char c : s )
    {
        if ( c == '"' )
            out += '"';
        out += c;
    }
    return out + "\"";
}

// Seconds since the epoch for numbers and ISO 8601 date-times; nothing if unparsable.
std::optional< long double > parse_timestamp( const std::string& raw )
{
    if ( raw.empty() )
        return std::nullopt;
    char* end = nullptr;
    const long double number = std::strtold( raw.c_str(), &end );
    if ( end == raw.c_str() + raw.size() )
        return number;

    int y, mo, d, h = 0, mi = 0, consumed = 0;
    double s = 0;
    if ( std::sscanf( raw.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &consumed ) != 3 )
        return std::nullopt;
    std::size_t pos = static_cast< std::size_t >( consumed );
    if ( pos < raw.size() && ( raw[ pos ] == 'T' || raw[ pos ] == ' ' ) )
    {
        int n = 0;
        if ( std::sscanf( raw.c_str() + pos + 1, "%2d:%2d:%lf%n", &h, &mi, &s, &n ) != 3 )
            return std::nullopt;
        pos += 1 + static_cast< std::size_t >( n );
    }
    long double offset = 0;
    if ( pos < raw.size() )
    {
        const auto zone = raw.substr( pos );
        int oh = 0, om = 0;
        if ( zone == "Z" )
            offset = 0;
        else if ( ( zone[ 0 ] == '+' || zone[ 0 ] == '-' ) && std::sscanf( zone.c_str() + 1, "%2d:%2d", &oh, &om ) == 2 )
            offset = ( zone[ 0 ] == '+' ? 1 : -1 ) * ( oh * 3600.0L + om * 60.0L );
        else
            return std::nullopt;
    }
    // Days from civil date (proleptic Gregorian).
    y -= mo <= 2;
    const long era = ( y >= 0 ? y : y - 399 ) / 400;
    const long yoe = y - era * 400;
    const long doy = ( 153 * ( mo + ( mo > 2 ? -3 : 9 ) ) + 2 ) / 5 + d - 1;
    const long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    const long days = era * 146097 + doe - 719468;
    return days * 86400.0L + h * 3600.0L + mi * 60.0L + s - offset;
}

} // namespace

EventLog parse_csv_log( const std::string& text, const std::string& source )
{
    const auto rows = parse_csv( text, source );
    if ( rows.empty() )
        throw DataError( source + ": missing header row" );

    std::map< std::string, std::size_t > column;
    for ( std::size_t i = 0; i < rows[ 0 ].size(); ++i )
    {
        std::string name = rows[ 0 ][ i ];
        if ( i == 0 && name.rfind( "\xEF\xBB\xBF", 0 ) == 0 )
            name.erase( 0, 3 );
        boost::algorithm::trim( name );
        boost::algorithm::to_lower( name );
        column[ name ] = i;
    }
    for ( const char* required : { "case_id", "activity" } )
        if ( !column.contains( required ) )
            throw DataError( source + ":1: missing required column '" + required + "'" );
    const auto role_col = column.contains( "role" ) ? std::optional( column[ "role" ] ) : std::nullopt;
    const auto time_col = column.contains( "timestamp" ) ? std::optional( column[ "timestamp" ] ) : std::nullopt;

    struct Row
    {
        Event event;
        std::optional< long double > time;
        std::size_t order;
    };
    std::vector< std::string > case_order;
    std::map< std::string, std::vector< Row > > cases;
    for ( std::size_t r = 1; r < rows.size(); ++r )
    {
        const auto& row = rows[ r ];
        const auto where = source + ":" + std::to_string( r + 1 ) + ": ";
        if ( row.size() != rows[ 0 ].size() )
            throw DataError( where + "expected " + std::to_string( rows[ 0 ].size() ) + " fields, found " +
                             std::to_string( row.size() ) );
        const auto& id = row[ column[ "case_id" ] ];
        if ( id.empty() )
            throw DataError( where + "empty case_id" );
        std::optional< std::string_view > role;
        if ( role_col && !row[ *role_col ].empty() )
            role = row[ *role_col ];
        std::optional< long double > time;
        if ( time_col && !row[ *time_col ].empty() )
        {
            time = parse_timestamp( row[ *time_col ] );
            if ( !time )
                throw DataError( where + "unparsable timestamp '" + row[ *time_col ] + "'" );
        }
        try
        {
            auto [ it, fresh ] = cases.try_emplace( id );
            if ( fresh )
                case_order.push_back( id );
            it->second.push_back( { Event( row[ column[ "activity" ] ], role ), time, r } );
        }
        catch ( const ModelError& e )
        {
            throw DataError( where + e.what() );
        }
    }

    EventLog log;
    for ( const auto& id : case_order )
    {
        auto& events = cases[ id ];
        std::stable_sort( events.begin(), events.end(), []( const Row& a, const Row& b ) {
            if ( a.time && b.time )
                return *a.time < *b.time;
            return false;
        } );
        Trace t{ id, {} };
        for ( auto& e : events )
            t.events.push_back( std::move( e.event ) );
        log.traces.push_back( std::move( t ) );
    }
    return log;
}

std::string to_csv( const EventLog& log )
{
    std::string out = "case_id,activity,role\n";
    for ( const auto& t : log.traces )
        for ( const auto& e : t.events )
            out += csv_field( t.case_id ) + "," + csv_field( e.activity ) + "," + csv_field( e.role.value_or( "" ) ) + "\n";
    return out;
}

// ---------------------------------------------------------------------------------------------
// XES

namespace
{

namespace pt = boost::property_tree;

std::optional< std::string > string_attribute( const pt::ptree& node, const std::string& key )
{
    for ( const auto& [ name, child ] : node )
        if ( name == "string" && child.get( "<xmlattr>.key", "" ) == key )
            return child.get< std::string >( "<xmlattr>.value", "" );
    return std::nullopt;
}

} // namespace

EventLog parse_xes( const std::string& text, const std::string& source )
{
    pt::ptree tree;
    try
    {
        std::istringstream in( text );
        pt::read_xml( in, tree );
    }
    catch ( const pt::xml_parser_error& e )
    {
        throw DataError( source + ":" + std::to_string( e.line() ) + ": " + e.message() );
    }
    const auto root = tree.get_child_optional( "log" );
    if ( !root )
        throw DataError( source + ": missing <log> root element" );

    EventLog log;
    std::size_t trace_no = 0;
    for ( const auto& [ name, trace_node ] : *root )
    {
        if ( name != "trace" )
            continue;
        ++trace_no;
        const auto where = source + ": trace #" + std::to_string( trace_no );
        auto id = string_attribute( trace_node, "concept:name" );
        if ( !id || id->empty() )
            throw DataError( where + " has no concept:name" );
        Trace t{ *id, {} };
        std::size_t event_no = 0;
        for ( const auto& [ child_name, event_node ] : trace_node )
        {
            if ( child_name != "event" )
                continue;
            ++event_no;
            const auto activity = string_attribute( event_node, "concept:name" );
            if ( !activity )
                throw DataError( where + ", event #" + std::to_string( event_no ) + " has no concept:name" );
            const auto role = string_attribute( event_node, "org:role" );
            try
            {
                t.events.emplace_back( *activity, role ? std::optional< std::string_view >( *role ) : std::nullopt );
            }
            catch ( const ModelError& e )
            {
                throw DataError( where + ", event #" + std::to_string( event_no ) + ": " + e.what() );
            }
        }
        log.traces.push_back( std::move( t ) );
    }
    return log;
}

std::string to_xes( const EventLog& log )
{
    pt::ptree tree;
    auto& root = tree.add( "log", "" );
    root.put( "<xmlattr>.xes.version", "1.0" );
    const auto add_string = []( pt::ptree& node, const std::string& key, const std::string& value ) {
        auto& s = node.add( "string", "" );
        s.put( "<xmlattr>.key", key );
        s.put( "<xmlattr>.value", value );
    };
    for ( const auto& t : log.traces )
    {
        auto& tn = root.add( "trace", "" );
        add_string( tn, "concept:name", t.case_id );
        for ( const auto& e : t.events )
        {
            auto& en = tn.add( "event", "" );
            add_string( en, "concept:name", e.activity );
            if ( e.role )
                add_string( en, "org:role", *e.role );
        }
    }
    std::ostringstream out;
    pt::write_xml( out, tree, pt::xml_writer_make_settings< std::string >( ' ', 2 ) );
    return out.str();
}

EventLog read_log( const std::filesystem::path& path )
{
    auto ext = path.extension().string();
    std::transform( ext.begin(), ext.end(), ext.begin(), []( unsigned char c ) { return std::tolower( c ); } );
    if ( ext == ".xes" )
        return parse_xes( read_text( path ), path.string() );
    if ( ext == ".csv" )
        return parse_csv_log( read_text( path ), path.string() );
    throw DataError( path.string() + ": unsupported log format (expected .xes or .csv)" );
}

// ---------------------------------------------------------------------------------------------
// Models

namespace
{

json parse_json( const std::string& text, const std::string& source )
{
    try
    {
        return json::parse( text );
    }
    catch ( const json::parse_error& e )
    {
        throw DataError( source + ": byte " + std::to_string( e.byte ) + ": " + e.what() );
    }
}

template < typename Fn >
auto with_source( const std::string& source, Fn&& fn ) -> decltype( fn() )
{
    try
    {
        return fn();
    }
    catch ( const json::exception& e )
    {
        throw DataError( source + ": " + e.what() );
    }
    catch ( const ModelError& e )
    {
        throw DataError( source + ": " + e.what() );
    }
    catch ( const std::invalid_argument& e )
    {
        throw DataError( source + ": " + e.what() );
    }
}

std::map< std::string, unsigned > marking_from_json( const json& j )
{
    std::map< std::string, unsigned > out;
    if ( j.is_array() )
        for ( const auto& p : j )
            ++out[ p.get< std::string >() ];
    else
        for ( const auto& [ p, n ] : j.items() )
            out[ p ] = n.get< unsigned >();
    return out;
}

WorkflowNet net_from_json( const json& j )
{
    WorkflowNet net;
    net.places = j.at( "places" ).get< std::vector< std::string > >();
    for ( const auto& t : j.at( "transitions" ) )
    {
        WorkflowNet::Transition tr;
        tr.id = t.at( "id" ).get< std::string >();
        if ( t.contains( "label" ) && !t[ "label" ].is_null() )
            tr.label = t[ "label" ].get< std::string >();
        net.transitions.push_back( std::move( tr ) );
    }
    for ( const auto& a : j.at( "arcs" ) )
    {
        if ( a.is_array() )
            net.arcs.push_back( { a.at( 0 ).get< std::string >(), a.at( 1 ).get< std::string >() } );
        else
            net.arcs.push_back( { a.at( "from" ).get< std::string >(), a.at( "to" ).get< std::string >() } );
    }
    net.initial = marking_from_json( j.at( "initial" ) );
    net.final = marking_from_json( j.at( "final" ) );
    return net;
}

json net_to_json( const WorkflowNet& net )
{
    json transitions = json::array();
    for ( const auto& t : net.transitions )
        transitions.push_back( { { "id", t.id }, { "label", t.label ? json( *t.label ) : json( nullptr ) } } );
    json arcs = json::array();
    for ( const auto& a : net.arcs )
        arcs.push_back( json::array( { a.from, a.to } ) );
    return { { "places", net.places }, { "transitions", transitions }, { "arcs", arcs },
             { "initial", net.initial }, { "final", net.final } };
}

} // namespace

ProcessModel parse_model( const std::string& text, const std::string& source, const PlayoutOptions& playout_opts )
{
    const auto j = parse_json( text, source );
    return with_source( source, [ & ] {
        const bool has_sequences = j.contains( "sequences" );
        const bool has_net = j.contains( "net" );
        if ( has_sequences == has_net )
            throw ModelError( "model must define exactly one of 'sequences' and 'net'" );

        const auto activities = j.at( "activities" ).get< std::set< Label > >();
        const auto roles = j.value( "roles", std::set< Label >{} );
        const auto role_map = j.value( "role_map", std::map< Label, Label >{} );
        std::set< Sequence > sequences;
        if ( has_sequences )
            sequences = j.at( "sequences" ).get< std::set< Sequence > >();
        else
            sequences = playout( net_from_json( j.at( "net" ) ), playout_opts );
        return ProcessModel( j.at( "id" ).get< std::string >(), activities, sequences, roles, role_map );
    } );
}

ProcessModel read_model( const std::filesystem::path& path, const PlayoutOptions& playout_opts )
{
    return parse_model( read_text( path ), path.string(), playout_opts );
}

std::vector< ProcessModel > read_models( const std::filesystem::path& dir, const PlayoutOptions& playout_opts )
{
    if ( !std::filesystem::is_directory( dir ) )
        throw DataError( dir.string() + ": not a directory" );
    std::vector< std::filesystem::path > files;
    for ( const auto& entry : std::filesystem::directory_iterator( dir ) )
        if ( entry.is_regular_file() && entry.path().extension() == ".json" )
            files.push_back( entry.path() );
    std::sort( files.begin(), files.end() );
    std::vector< ProcessModel > models;
    for ( const auto& f : files )
        models.push_back( read_model( f, playout_opts ) );
    return models;
}

std::string model_to_json( const ProcessModel& m )
{
    const json j{ { "id", m.id() },       { "activities", m.activities() }, { "roles", m.roles() },
                  { "role_map", m.role_map() }, { "sequences", m.sequences() } };
    return j.dump( 2 ) + "\n";
}

std::string net_model_to_json( const std::string& id, const std::set< Label >& activities, const std::set< Label >& roles,
                               const std::map< Label, Label >& role_map, const WorkflowNet& net )
{
    const json j{ { "id", id }, { "activities", activities }, { "roles", roles }, { "role_map", role_map },
                  { "net", net_to_json( net ) } };
    return j.dump( 2 ) + "\n";
}

// ---------------------------------------------------------------------------------------------
// Constraints

namespace
{

json params_to_json( const ConstraintKey& k )
{
    const auto& p = k.params;
    switch ( k.kind )
    {
    case ConstraintKind::Activity:
        return { { "a1", p.first }, { "a2", p.second } };
    case ConstraintKind::InterObject:
        return { { "o1", p.first }, { "o2", p.second } };
    case ConstraintKind::IntraObject: {
        json j{ { "object", p.scope }, { "n1", p.first } };
        if ( !p.second.empty() )
            j[ "n2" ] = p.second;
        return j;
    }
    case ConstraintKind::Role:
        return { { "a", p.first }, { "r", p.second } };
    }
    return json::object();
}

json key_to_json( const ConstraintKey& k )
{
    return { { "kind", to_string( k.kind ) }, { "template", to_string( k.templ ) }, { "params", params_to_json( k ) } };
}

ConstraintKey key_from_json( const json& j )
{
    const auto kind_name = j.at( "kind" ).get< std::string >();
    const auto templ_name = j.at( "template" ).get< std::string >();
    const auto kind = kind_from_string( kind_name );
    if ( !kind )
        throw ModelError( "unknown constraint kind '" + kind_name + "'" );
    const auto templ = template_from_string( templ_name );
    if ( !templ )
        throw ModelError( "unknown template '" + templ_name + "'" );
    const auto& p = j.at( "params" );
    ConstraintParams params;
    switch ( *kind )
    {
    case ConstraintKind::Activity:
        params = { {}, p.at( "a1" ).get< std::string >(), p.at( "a2" ).get< std::string >() };
        break;
    case ConstraintKind::InterObject:
        params = { {}, p.at( "o1" ).get< std::string >(), p.at( "o2" ).get< std::string >() };
        break;
    case ConstraintKind::IntraObject:
        params = { p.at( "object" ).get< std::string >(), p.at( "n1" ).get< std::string >(), p.value( "n2", "" ) };
        break;
    case ConstraintKind::Role:
        params = { {}, p.at( "a" ).get< std::string >(), p.at( "r" ).get< std::string >() };
        break;
    }
    // Validates template admissibility and parameter shape.
    return MinedConstraint( *kind, *templ, std::move( params ) ).key();
}

json info_to_json( const RunInfo& info ) { return { { "seed", info.seed }, { "config", info.config } }; }

RunInfo info_from_json( const json& j )
{
    return { j.value( "seed", std::uint64_t{ 0 } ), j.value( "config", std::map< std::string, std::string >{} ) };
}

} // namespace

std::string constraints_to_jsonl( const ConstraintCollection& c, const RunInfo& info )
{
    std::string out = json{ { "header", info_to_json( info ) } }.dump() + "\n";
    for ( const auto& [ key, models ] : c.entries() )
    {
        auto j = key_to_json( key );
        j[ "support" ] = models.size();
        j[ "provenance" ] = models;
        out += j.dump() + "\n";
    }
    return out;
}

ConstraintFile parse_constraints( const std::string& text, const std::string& source )
{
    ConstraintFile out;
    std::istringstream in( text );
    std::string line;
    for ( std::size_t number = 1; std::getline( in, line ); ++number )
    {
        if ( !line.empty() && line.back() == '\r' )
            line.pop_back();
        if ( line.find_first_not_of( " \t" ) == std::string::npos )
            continue;
        const auto where = source + ":" + std::to_string( number );
        const auto j = parse_json( line, where );
        with_source( where, [ & ] {
            if ( j.contains( "header" ) )
            {
                out.info = info_from_json( j[ "header" ] );
                return;
            }
            const auto key = key_from_json( j );
            const auto support = j.at( "support" ).get< std::int64_t >();
            if ( support <= 0 )
                throw ModelError( "support must be positive" );
            auto provenance = j.at( "provenance" ).get< std::set< std::string > >();
            if ( provenance.size() != static_cast< std::size_t >( support ) )
                throw ModelError( "support " + std::to_string( support ) + " does not match " +
                                  std::to_string( provenance.size() ) + " provenance entries" );
            if ( out.collection.contains( key ) )
                throw ModelError( "duplicate constraint " + key.str() );
            out.collection.add( key, provenance );
        } );
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Selected sets

std::string selected_to_json( const SelectedSet& s )
{
    json constraints = json::array();
    for ( const auto& c : s.constraints )
    {
        auto j = key_to_json( c.key );
        j[ "source" ] = key_to_json( c.source );
        j[ "support" ] = c.support;
        j[ "relevance" ] = c.relevance;
        json sim = json::array();
        for ( const auto& e : c.sim )
            sim.push_back( { { "model", e.model_component }, { "log", e.log_component }, { "score", e.score } } );
        j[ "sim" ] = sim;
        constraints.push_back( std::move( j ) );
    }
    json removed = json::array();
    for ( const auto& k : s.removed )
        removed.push_back( k.str() );
    auto j = info_to_json( s.info );
    j[ "constraints" ] = constraints;
    j[ "removed" ] = removed;
    j[ "diagnostics" ] = s.diagnostics;
    return j.dump( 2 ) + "\n";
}

SelectedSet parse_selected( const std::string& text, const std::string& source )
{
    const auto j = parse_json( text, source );
    return with_source( source, [ & ] {
        SelectedSet s;
        s.info = info_from_json( j );
        for ( const auto& c : j.at( "constraints" ) )
        {
            FittedConstraint f;
            f.key = key_from_json( c );
            f.source = key_from_json( c.at( "source" ) );
            const auto support = c.at( "support" ).get< std::int64_t >();
            if ( support <= 0 )
                throw ModelError( "support must be positive" );
            f.support = static_cast< std::uint32_t >( support );
            f.relevance = c.at( "relevance" ).get< double >();
            for ( const auto& e : c.at( "sim" ) )
                f.sim.push_back( { e.at( "model" ).get< std::string >(), e.at( "log" ).get< std::string >(),
                                   e.at( "score" ).get< double >() } );
            s.constraints.push_back( std::move( f ) );
        }
        for ( const auto& k : j.value( "removed", json::array() ) )
            s.removed.push_back( ConstraintKey::parse( k.get< std::string >() ) );
        s.diagnostics = j.value( "diagnostics", std::vector< std::string >{} );
        return s;
    } );
}

// ---------------------------------------------------------------------------------------------
// Reports

std::string report_to_json( const ViolationReport& r )
{
    json groups = json::array();
    for ( const auto& g : r.groups )
    {
        auto j = key_to_json( g.constraint );
        j[ "key" ] = g.constraint.str();
        j[ "explanation" ] = g.explanation;
        j[ "count" ] = g.count;
        j[ "cases" ] = g.case_ids;
        groups.push_back( std::move( j ) );
    }
    const json j{ { "config", r.config }, { "traces", r.traces }, { "totals", r.totals }, { "groups", groups } };
    return j.dump( 2 ) + "\n";
}

ViolationReport parse_report( const std::string& text, const std::string& source )
{
    const auto j = parse_json( text, source );
    return with_source( source, [ & ] {
        ViolationReport r;
        r.config = j.at( "config" ).get< std::map< std::string, std::string > >();
        r.traces = j.at( "traces" ).get< std::size_t >();
        r.totals = j.at( "totals" ).get< std::map< std::string, std::size_t > >();
        for ( const auto& g : j.at( "groups" ) )
        {
            ViolationGroup group{ key_from_json( g ), g.at( "explanation" ).get< std::string >(),
                                  g.at( "cases" ).get< std::vector< std::string > >(), g.at( "count" ).get< std::size_t >() };
            if ( group.count != group.case_ids.size() )
                throw ModelError( "group count does not match its case list" );
            r.groups.push_back( std::move( group ) );
        }
        return r;
    } );
}

// ---------------------------------------------------------------------------------------------
// Filters

std::string filter_to_json( const ReviewFilter& f )
{
    const json j{ { "exclude",
                    { { "objects", f.objects }, { "actions", f.actions }, { "activities", f.activities }, { "roles", f.roles } } },
                  { "pin", f.pinned } };
    return j.dump( 2 ) + "\n";
}

ReviewFilter parse_filter( const std::string& text, const std::string& source )
{
    const auto j = parse_json( text, source );
    return with_source( source, [ & ] {
        ReviewFilter f;
        const auto exclude = j.value( "exclude", json::object() );
        const auto labels = [ & ]( const char* name ) {
            std::set< Label > out;
            for ( const auto& x : exclude.value( name, json::array() ) )
                out.insert( normalize_label( x.get< std::string >() ) );
            return out;
        };
        f.objects = labels( "objects" );
        f.actions = labels( "actions" );
        f.activities = labels( "activities" );
        f.roles = labels( "roles" );
        for ( const auto& p : j.value( "pin", json::array() ) )
            f.pinned.insert( ConstraintKey::parse( p.get< std::string >() ).str() );
        return f;
    } );
}

// ---------------------------------------------------------------------------------------------
// Metrics

namespace
{

std::string number( std::optional< double > x )
{
    if ( !x )
        return "NA";
    char buf[ 32 ];
    std::snprintf( buf, sizeof buf, "%.6f", *x );
    return buf;
}

std::string setting_k( const EvalSetting& s ) { return s.k ? std::to_string( *s.k ) : "NA"; }
std::string setting_tau( const EvalSetting& s ) { return s.tau ? number( *s.tau ) : "NA"; }

} // namespace

std::string metrics_to_csv( const std::vector< MetricsRow >& rows, const RunInfo& info )
{
    std::string out = "# seed=" + std::to_string( info.seed );
    for ( const auto& [ k, v ] : info.config )
        out += " " + k + "=" + v;
    out += "\nfold,model_id,kind,k,tau,omega,tp,fp,fn,precision,recall\n";
    for ( const auto& r : rows )
        out += std::to_string( r.fold ) + "," + csv_field( r.model_id ) + "," + r.kind + "," + setting_k( r.setting ) +
               "," + setting_tau( r.setting ) + "," + number( r.setting.omega ) + "," + std::to_string( r.record.tp ) +
               "," + std::to_string( r.record.fp ) + "," + std::to_string( r.record.fn ) + "," +
               number( r.record.precision() ) + "," + number( r.record.recall() ) + "\n";
    return out;
}

std::string summary_to_text( const std::vector< SummaryRow >& rows )
{
    std::ostringstream out;
    char buf[ 256 ];
    std::snprintf( buf, sizeof buf, "%-9s %5s %5s %5s %8s %8s %8s %9s %7s %5s\n", "kind", "k", "tau", "omega", "TP",
                   "FP", "FN", "precision", "recall", "logs" );
    out << buf;
    for ( const auto& r : rows )
    {
        std::snprintf( buf, sizeof buf, "%-9s %5s %5s %5.2f %8.2f %8.2f %8.2f %9s %7s %5zu\n", r.kind.c_str(),
                       setting_k( r.setting ).c_str(), r.setting.tau ? number( r.setting.tau ).substr( 0, 4 ).c_str() : "NA",
                       r.setting.omega, r.tp, r.fp, r.fn,
                       r.precision ? number( r.precision ).substr( 0, 5 ).c_str() : "NA",
                       r.recall ? number( r.recall ).substr( 0, 5 ).c_str() : "NA", r.logs );
        out << buf;
    }
    return out.str();
}

} // namespace bpcheck
