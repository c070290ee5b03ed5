#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bpcheck
{

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Callers write results by index, so output
/// order never depends on scheduling. The first exception thrown is rethrown after all workers join.
template < typename Fn >
void parallel_for( std::size_t n, unsigned jobs, Fn&& fn )
{
    jobs = std::max( 1u, std::min< unsigned >( jobs, static_cast< unsigned >( std::min< std::size_t >( n, 256 ) ) ) );
    if ( jobs <= 1 )
    {
        for ( std::size_t i = 0; i < n; ++i )
            fn( i );
        return;
    }

    std::atomic< std::size_t > next{ 0 };
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector< std::thread > workers;
    workers.reserve( jobs );
    for ( unsigned w = 0; w < jobs; ++w )
        workers.emplace_back( [ & ] {
            for ( std::size_t i = next++; i < n; i = next++ )
            {
                try
                {
                    fn( i );
                }
                catch ( ... )
                {
                    std::lock_guard lock( error_mutex );
                    if ( !error )
                        error = std::current_exception();
                    next = n;
                }
            }
        } );
    for ( auto& t : workers )
        t.join();
    if ( error )
        std::rethrow_exception( error );
}

} // namespace bpcheck
