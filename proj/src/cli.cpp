#include "bpcheck/cli.hpp"

#include "bpcheck/checker.hpp"
#include "bpcheck/eval.hpp"
#include "bpcheck/io.hpp"
#include "bpcheck/miner.hpp"
#include "bpcheck/similarity.hpp"
#include "bpcheck/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace bpcheck
{

bool run_review_session( std::istream& in, std::ostream& out, const std::vector< FittedConstraint >& shown,
                         ReviewFilter& filter )
{
    bool ok = true;
    std::string line;
    out << "review> " << std::flush;
    while ( std::getline( in, line ) )
    {
        std::istringstream words( line );
        std::string command;
        words >> command;
        std::string rest;
        std::getline( words >> std::ws, rest );

        if ( command.empty() || command[ 0 ] == '#' )
        {
        }
        else if ( command == "done" || command == "quit" )
            break;
        else if ( command == "list" )
        {
            for ( std::size_t i = 0; i < shown.size(); ++i )
                out << i + 1 << ". " << shown[ i ].key.str() << "  relevance " << shown[ i ].relevance << '\n';
        }
        else if ( command == "pin" && !rest.empty() )
        {
            try
            {
                filter.pinned.insert( ConstraintKey::parse( rest ).str() );
            }
            catch ( const ModelError& e )
            {
                out << e.what() << '\n';
                ok = false;
            }
        }
        else if ( command == "drop" || command == "exclude" )
        {
            std::istringstream parts( rest );
            std::string what, label;
            parts >> what;
            std::getline( parts >> std::ws, label );
            label = normalize_label( label );
            std::set< Label >* target = what == "object"     ? &filter.objects
                                        : what == "action"   ? &filter.actions
                                        : what == "activity" ? &filter.activities
                                        : what == "role"     ? &filter.roles
                                                             : nullptr;
            if ( !target || label.empty() )
            {
                out << "usage: drop object|action|activity|role <label>\n";
                ok = false;
            }
            else
                target->insert( label );
        }
        else
        {
            out << "unknown command '" << command << "' (drop, pin, list, done)\n";
            ok = false;
        }
        out << "review> " << std::flush;
    }
    out << '\n';
    return ok;
}

namespace
{

struct CommonOptions
{
    std::string lexicon_dir;
    std::string vectors;
    std::string endpoint;
    int timeout_ms = 5000;
    int max_in_flight = 4;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
};

struct SelectOptions
{
    std::optional< std::size_t > k;
    std::optional< double > tau;
    std::vector< std::string > kind_k;
    std::vector< std::string > kind_tau;
    double omega = 0.9;
    std::optional< double > epsilon;
    std::optional< double > epsilon_activity, epsilon_object, epsilon_role;
    std::size_t mcs_cap = 3;
    std::string filter;
    bool interactive = false;
};

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

void add_common( CLI::App* cmd, CommonOptions& c, bool with_provider )
{
    cmd->add_option( "--lexicon", c.lexicon_dir, "Directory with verbs/synonyms/irregular/participles files" );
    cmd->add_option( "--jobs", c.jobs, "Worker threads" )->check( CLI::Range( 1u, 256u ) );
    cmd->add_option( "--seed", c.seed, "Seed recorded in outputs and used for randomized steps" );
    if ( !with_provider )
        return;
    cmd->add_option( "--vectors", c.vectors, "Phrase vector file (phrase<TAB>v1 ... vd)" );
    cmd->add_option( "--endpoint", c.endpoint, "Embedding service URL (env BPCHECK_EMBED_ENDPOINT overrides)" );
    cmd->add_option( "--timeout-ms", c.timeout_ms, "Embedding service timeout" )->check( CLI::PositiveNumber );
    cmd->add_option( "--max-in-flight", c.max_in_flight, "Concurrent embedding requests" )->check( CLI::Range( 1, 64 ) );
}

void add_select( CLI::App* cmd, SelectOptions& s )
{
    auto* k = cmd->add_option( "--k", s.k, "Keep the k most relevant constraints per kind" )->check( CLI::PositiveNumber );
    auto* tau = cmd->add_option( "--tau", s.tau, "Keep constraints with relevance above tau" )->check( CLI::Range( 0.0, 1.0 ) );
    k->excludes( tau );
    cmd->add_option( "--kind-k", s.kind_k, "Per-kind top-k, KIND=N (kinds: activity, interobj, intraobj, role)" );
    cmd->add_option( "--kind-tau", s.kind_tau, "Per-kind threshold, KIND=X" );
    cmd->add_option( "--omega", s.omega, "Weight of similarity against support" )->check( CLI::Range( 0.0, 1.0 ) );
    cmd->add_option( "--epsilon", s.epsilon, "Match threshold for all components" )->check( CLI::Range( 0.0, 1.0 ) );
    cmd->add_option( "--epsilon-activity", s.epsilon_activity )->check( CLI::Range( 0.0, 1.0 ) );
    cmd->add_option( "--epsilon-object", s.epsilon_object )->check( CLI::Range( 0.0, 1.0 ) );
    cmd->add_option( "--epsilon-role", s.epsilon_role )->check( CLI::Range( 0.0, 1.0 ) );
    cmd->add_option( "--mcs-cap", s.mcs_cap, "Largest correction set considered during repair" )->check( CLI::PositiveNumber );
    cmd->add_option( "--filter", s.filter, "Review filter JSON" );
    cmd->add_flag( "--interactive", s.interactive, "Read review commands from stdin before repair" );
}

std::string fmt( double x )
{
    char buf[ 32 ];
    std::snprintf( buf, sizeof buf, "%g", x );
    return buf;
}

ConstraintKind parse_kind( const std::string& name )
{
    if ( auto k = kind_from_string( name ) )
        return *k;
    throw UsageError( "unknown constraint kind '" + name + "'" );
}

SelectionConfig selection_config( const SelectOptions& s )
{
    SelectionConfig c;
    c.omega = s.omega;
    c.mcs_size_cap = s.mcs_cap;
    if ( s.epsilon )
        c.epsilon = { *s.epsilon, *s.epsilon, *s.epsilon };
    if ( s.epsilon_activity )
        c.epsilon.activity = *s.epsilon_activity;
    if ( s.epsilon_object )
        c.epsilon.object = *s.epsilon_object;
    if ( s.epsilon_role )
        c.epsilon.role = *s.epsilon_role;
    if ( s.k )
        c.use_top_k( *s.k );
    if ( s.tau )
        c.use_threshold( *s.tau );

    std::set< ConstraintKind > with_k, with_tau;
    const auto split = [ & ]( const std::string& item ) {
        const auto eq = item.find( '=' );
        if ( eq == std::string::npos )
            throw UsageError( "expected KIND=VALUE, got '" + item + "'" );
        return std::make_pair( parse_kind( item.substr( 0, eq ) ), item.substr( eq + 1 ) );
    };
    try
    {
        for ( const auto& item : s.kind_k )
        {
            const auto [ kind, value ] = split( item );
            c.rule( kind ).strategy = Strategy::TopK;
            c.rule( kind ).k = std::stoul( value );
            with_k.insert( kind );
        }
        for ( const auto& item : s.kind_tau )
        {
            const auto [ kind, value ] = split( item );
            if ( with_k.contains( kind ) )
                throw UsageError( "--kind-k and --kind-tau are mutually exclusive for " + std::string( to_string( kind ) ) );
            c.rule( kind ).strategy = Strategy::Threshold;
            c.rule( kind ).tau = std::stod( value );
            with_tau.insert( kind );
        }
    }
    catch ( const std::logic_error& e )
    {
        if ( dynamic_cast< const UsageError* >( &e ) )
            throw;
        throw UsageError( std::string( "bad per-kind value: " ) + e.what() );
    }
    try
    {
        c.validate();
    }
    catch ( const std::invalid_argument& e )
    {
        throw UsageError( e.what() );
    }
    return c;
}

std::map< std::string, std::string > describe( const SelectionConfig& c, const SimilarityProvider& provider )
{
    std::map< std::string, std::string > out;
    out[ "omega" ] = fmt( c.omega );
    out[ "epsilon.activity" ] = fmt( c.epsilon.activity );
    out[ "epsilon.object" ] = fmt( c.epsilon.object );
    out[ "epsilon.role" ] = fmt( c.epsilon.role );
    out[ "mcs_size_cap" ] = std::to_string( c.mcs_size_cap );
    out[ "similarity" ] = provider.name();
    for ( ConstraintKind k : all_kinds )
    {
        const auto& r = c.rule( k );
        out[ "select." + std::string( to_string( k ) ) ] =
            r.strategy == Strategy::TopK ? "k=" + std::to_string( r.k ) : "tau=" + fmt( r.tau );
    }
    return out;
}

struct Context
{
    std::optional< Lexicon > custom;
    std::unique_ptr< LabelIndex > labels;

    explicit Context( const CommonOptions& c )
    {
        if ( !c.lexicon_dir.empty() )
        {
            if ( !std::filesystem::is_directory( c.lexicon_dir ) )
                throw DataError( c.lexicon_dir + ": lexicon directory not found" );
            custom = Lexicon::load( c.lexicon_dir );
        }
        labels = std::make_unique< LabelIndex >( custom ? *custom : Lexicon::builtin() );
    }
};

std::unique_ptr< SimilarityProvider > provider_for( const CommonOptions& c )
{
    ProviderConfig pc;
    pc.vectors = c.vectors;
    pc.endpoint = c.endpoint;
    pc.timeout = std::chrono::milliseconds( c.timeout_ms );
    pc.max_in_flight = c.max_in_flight;
    return make_provider( pc );
}

ConstraintCollection do_mine( const std::string& models_dir, const CommonOptions& c, const LabelIndex& labels )
{
    return mine_collection( read_models( models_dir ), labels, c.jobs );
}

SelectedSet do_select( const ConstraintCollection& collection, const EventLog& log, const SelectOptions& s,
                       const CommonOptions& c, const LabelIndex& labels, std::istream& in, std::ostream& out )
{
    const auto config = selection_config( s );
    const auto provider = provider_for( c );

    ReviewFilter filter;
    if ( !s.filter.empty() )
        filter = parse_filter( read_text( s.filter ), s.filter );

    auto fitted = fit_constraints( collection.constraints(), log, config, *provider, labels );
    score_relevance( fitted, config.omega );
    auto selected = select( fitted, config );
    if ( s.interactive )
        run_review_session( in, out, selected, filter );
    filter.validate( labels );
    selected = apply_review( selected, filter, labels );
    auto repaired = ensure_consistency( selected, config, filter );

    SelectedSet result;
    result.constraints = std::move( repaired.constraints );
    result.removed = std::move( repaired.removed );
    result.diagnostics = std::move( repaired.diagnostics );
    result.info = { c.seed, describe( config, *provider ) };
    return result;
}

ViolationReport do_check( const EventLog& log, const SelectedSet& selected, const CommonOptions& c,
                          const LabelIndex& labels )
{
    auto report = aggregate( check_log( log, keys_of( selected.constraints ), labels, c.jobs ), log, labels.lexicon() );
    report.config = selected.info.config;
    report.config[ "seed" ] = std::to_string( selected.info.seed );
    return report;
}

} // namespace

int run_cli( const std::vector< std::string >& args, std::istream& in, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "Mine, select and check best-practice constraints for event logs", "bpcheck" };
    app.require_subcommand( 1 );

    CommonOptions common;
    SelectOptions sel;
    std::string models_dir, out_path, constraints_path, log_path, selected_path, summary_path, model_path;
    std::string constraints_out, selected_out;
    bool text = false, noise = false;
    std::size_t folds = 5, count = 20, min_traces = 100;
    NoiseOptions noise_opts;

    auto* mine = app.add_subcommand( "mine", "Extract constraints from a model collection" );
    mine->add_option( "--models", models_dir, "Directory of model JSON files" )->required();
    mine->add_option( "--out", out_path, "Constraint collection (JSON lines)" )->required();
    add_common( mine, common, false );

    auto* selc = app.add_subcommand( "select", "Fit, select and repair constraints for a log" );
    selc->add_option( "--constraints", constraints_path, "Constraint collection" )->required();
    selc->add_option( "--log", log_path, "Event log (.xes or .csv)" )->required();
    selc->add_option( "--out", out_path, "Selected set JSON" )->required();
    add_select( selc, sel );
    add_common( selc, common, true );

    auto* check = app.add_subcommand( "check", "Check a log against a selected set" );
    check->add_option( "--log", log_path, "Event log" )->required();
    check->add_option( "--selected", selected_path, "Selected set JSON" )->required();
    check->add_option( "--out", out_path, "Report JSON" )->required();
    check->add_flag( "--text", text, "Also print the report as a table" );
    add_common( check, common, false );

    auto* run = app.add_subcommand( "run", "mine, select and check in one go" );
    run->add_option( "--models", models_dir, "Directory of model JSON files" )->required();
    run->add_option( "--log", log_path, "Event log" )->required();
    run->add_option( "--out", out_path, "Report JSON" )->required();
    run->add_option( "--constraints-out", constraints_out, "Also write the mined collection" );
    run->add_option( "--selected-out", selected_out, "Also write the selected set" );
    run->add_flag( "--text", text, "Also print the report as a table" );
    add_select( run, sel );
    add_common( run, common, true );

    auto* evaluate = app.add_subcommand( "evaluate", "Cross-validate against noisy logs generated from the models" );
    evaluate->add_option( "--models", models_dir, "Directory of model JSON files" )->required();
    evaluate->add_option( "--out", out_path, "Metrics CSV" )->required();
    evaluate->add_option( "--folds", folds, "Number of folds" )->check( CLI::PositiveNumber );
    evaluate->add_option( "--summary", summary_path, "Write per-kind averages here instead of stdout" );
    evaluate->add_option( "--min-traces", min_traces, "Traces per generated log" )->check( CLI::PositiveNumber );
    evaluate->add_option( "--p-trace", noise_opts.p_trace, "Probability of mutating a trace" )->check( CLI::Range( 0.0, 1.0 ) );
    evaluate->add_option( "--p-repeat", noise_opts.p_repeat, "Probability of each further mutation" )
        ->check( CLI::Range( 0.0, 1.0 ) );
    evaluate->add_option( "--epsilon", sel.epsilon, "Match threshold for all components" )->check( CLI::Range( 0.0, 1.0 ) );
    evaluate->add_option( "--mcs-cap", sel.mcs_cap, "Largest correction set considered during repair" )
        ->check( CLI::PositiveNumber );
    add_common( evaluate, common, true );

    auto* review = app.add_subcommand( "review", "Build a review filter from commands on stdin" );
    review->add_option( "--selected", selected_path, "Selected set JSON" )->required();
    review->add_option( "--out", out_path, "Filter JSON" )->required();
    add_common( review, common, false );

    auto* gen_models = app.add_subcommand( "generate-models", "Write the synthetic model collection" );
    gen_models->add_option( "--out", out_path, "Output directory" )->required();
    gen_models->add_option( "--count", count, "Number of models" )->check( CLI::PositiveNumber );
    add_common( gen_models, common, false );

    auto* gen_log = app.add_subcommand( "generate-log", "Play out a model into a log, optionally with noise" );
    gen_log->add_option( "--model", model_path, "Model JSON" )->required();
    gen_log->add_option( "--out", out_path, "Log (.csv or .xes)" )->required();
    gen_log->add_option( "--min-traces", min_traces, "Traces per log" )->check( CLI::PositiveNumber );
    gen_log->add_flag( "--noise", noise, "Inject noise" );
    gen_log->add_option( "--p-trace", noise_opts.p_trace )->check( CLI::Range( 0.0, 1.0 ) );
    gen_log->add_option( "--p-repeat", noise_opts.p_repeat )->check( CLI::Range( 0.0, 1.0 ) );
    add_common( gen_log, common, false );

    std::vector< const char* > argv;
    for ( const auto& a : args )
        argv.push_back( a.c_str() );
    try
    {
        app.parse( static_cast< int >( argv.size() ), argv.data() );
    }
    catch ( const CLI::ParseError& e )
    {
        const int code = app.exit( e, out, err );
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if ( *selc || *run )
            (void)selection_config( sel ); // usage errors before any file is read
        Context ctx( common );
        const auto& labels = *ctx.labels;

        if ( *mine )
        {
            const auto collection = do_mine( models_dir, common, labels );
            write_text( out_path, constraints_to_jsonl( collection, { common.seed, { { "command", "mine" } } } ) );
            err << "mined " << collection.size() << " constraints\n";
        }
        else if ( *selc )
        {
            const auto file = parse_constraints( read_text( constraints_path ), constraints_path );
            const auto log = read_log( log_path );
            const auto selected = do_select( file.collection, log, sel, common, labels, in, out );
            write_text( out_path, selected_to_json( selected ) );
            err << "selected " << selected.constraints.size() << " constraints\n";
            for ( const auto& d : selected.diagnostics )
                err << "warning: " << d << '\n';
        }
        else if ( *check )
        {
            const auto log = read_log( log_path );
            const auto selected = parse_selected( read_text( selected_path ), selected_path );
            const auto report = do_check( log, selected, common, labels );
            write_text( out_path, report_to_json( report ) );
            if ( text )
                out << render_text( report );
        }
        else if ( *run )
        {
            const auto collection = do_mine( models_dir, common, labels );
            if ( !constraints_out.empty() )
                write_text( constraints_out, constraints_to_jsonl( collection, { common.seed, { { "command", "run" } } } ) );
            const auto log = read_log( log_path );
            const auto selected = do_select( collection, log, sel, common, labels, in, out );
            if ( !selected_out.empty() )
                write_text( selected_out, selected_to_json( selected ) );
            for ( const auto& d : selected.diagnostics )
                err << "warning: " << d << '\n';
            const auto report = do_check( log, selected, common, labels );
            write_text( out_path, report_to_json( report ) );
            if ( text )
                out << render_text( report );
        }
        else if ( *evaluate )
        {
            const auto models = read_models( models_dir );
            if ( models.size() < folds )
                throw UsageError( "--folds " + std::to_string( folds ) + " exceeds the " +
                                  std::to_string( models.size() ) + " models found" );
            const auto provider = provider_for( common );
            CrossValidationOptions cv;
            cv.folds = folds;
            cv.seed = common.seed;
            cv.noise = noise_opts;
            cv.min_traces = min_traces;
            cv.jobs = common.jobs;
            SelectOptions base_opts = sel;
            cv.base = selection_config( base_opts );
            const auto rows = cross_validate( models, cv, *provider, labels );

            RunInfo info{ common.seed, describe( cv.base, *provider ) };
            info.config.erase( "omega" );
            for ( ConstraintKind k : all_kinds )
                info.config.erase( "select." + std::string( to_string( k ) ) );
            info.config[ "folds" ] = std::to_string( folds );
            info.config[ "p_trace" ] = fmt( noise_opts.p_trace );
            info.config[ "p_repeat" ] = fmt( noise_opts.p_repeat );
            info.config[ "min_traces" ] = std::to_string( min_traces );
            write_text( out_path, metrics_to_csv( rows, info ) );
            const auto summary = summary_to_text( summarize( rows ) );
            if ( summary_path.empty() )
                out << summary;
            else
                write_text( summary_path, summary );
        }
        else if ( *review )
        {
            const auto selected = parse_selected( read_text( selected_path ), selected_path );
            ReviewFilter filter;
            const bool ok = run_review_session( in, out, selected.constraints, filter );
            filter.validate( labels );
            write_text( out_path, filter_to_json( filter ) );
            if ( !ok )
                err << "warning: some review commands were ignored\n";
        }
        else if ( *gen_models )
        {
            std::filesystem::create_directories( out_path );
            for ( const auto& m : synthetic_collection( count, common.seed ) )
                write_text( std::filesystem::path( out_path ) / ( m.id + ".json" ),
                            net_model_to_json( m.id, m.activities, m.roles, m.role_map, m.net ) );
        }
        else if ( *gen_log )
        {
            const auto model = read_model( model_path );
            auto log = generate_log( model, derive_seed( common.seed, "log/" + model.id() ), min_traces );
            if ( noise )
                log = inject_noise( log, model, derive_seed( common.seed, "noise/" + model.id() ), noise_opts ).log;
            const auto ext = std::filesystem::path( out_path ).extension();
            write_text( out_path, ext == ".xes" ? to_xes( log ) : to_csv( log ) );
        }
        return exit_ok;
    }
    catch ( const UsageError& e )
    {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    catch ( const std::exception& e )
    {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
}

} // namespace bpcheck
