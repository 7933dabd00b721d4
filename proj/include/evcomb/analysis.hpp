/*
 *   Copyright 2026 The evcomb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * Sampled audits of a Combiner: the semigroup laws, idempotent discovery,
 * segment classification (addition type vs bounded-sum type), and slope based
 * robustness analysis.
 *
 * All sampling is driven by a seeded std::mt19937_64. Audits may run on several
 * threads; the reduction keeps the largest violation and, among equal ones, the
 * lowest sample index, so results do not depend on the thread count.
 */

#ifndef EVCOMB_ANALYSIS_HPP
#define EVCOMB_ANALYSIS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "combiner.hpp"
#include "error.hpp"
#include "generators.hpp"
#include "interval.hpp"

namespace evcomb {

enum class Law { commutativity, associativity, monotonicity, continuity, identity, annihilator };

inline constexpr std::array< Law, 6 > all_laws{ Law::commutativity, Law::associativity,
	Law::monotonicity, Law::continuity, Law::identity, Law::annihilator };

constexpr const char *to_string( Law law ) noexcept {
	switch( law ) {
		case Law::commutativity: return "commutativity";
		case Law::associativity: return "associativity";
		case Law::monotonicity: return "monotonicity";
		case Law::continuity: return "continuity";
		case Law::identity: return "identity";
		case Law::annihilator: return "annihilator";
	}
	return "unknown";
}

/** Slack for the exact laws: identity, annihilator, monotonicity. */
inline constexpr double exact_law_tolerance = 1e-12;
inline constexpr double discovery_tolerance = 1e-9;

/**
 * The inputs of one law probe. Meaning by law:
 * commutativity (a, b); associativity (a, b, c); monotonicity (a, b, c) with
 * b <= c; continuity (a, b, c, d) with b <= c and d between a*b and a*c;
 * identity (a, e); annihilator (a, z).
 */
struct Witness {
	std::array< double, 4 > x{};
	std::size_t sample_index = 0;
};

struct LawResult {
	Law law = Law::commutativity;
	double max_violation = 0;
	std::optional< Witness > witness;
	std::size_t evaluated = 0;
	std::size_t skipped = 0;
	double tolerance = 0;
	bool pass = true;
};

struct IdempotentScan {
	std::vector< double > points;
	bool all_idempotent = false;
};

struct PropertyReport {
	std::vector< LawResult > laws;
	std::uint64_t seed = 0;
	std::size_t samples = 0;
	IdempotentScan idempotents;
	std::optional< double > discovered_identity;
	std::vector< double > discovered_annihilators;

	bool pass() const noexcept {
		return std::all_of( laws.begin(), laws.end(), []( const LawResult &r ) { return r.pass; } );
	}
	const LawResult &law( Law l ) const {
		for( const auto &r : laws ) {
			if( r.law == l ) { return r; }
		}
		throw Error( ErrorKind::OutOfRange, std::string( "no result for law " ) + to_string( l ) );
	}
};

namespace detail {

	inline double unit_draw( std::mt19937_64 &rng ) {
		return static_cast< double >( rng() >> 11 ) * 0x1.0p-53;
	}

	/** Uniform on the interval, with 10% drawn from the outer 1% at either end and 1% exact endpoints. */
	inline double sample_value( std::mt19937_64 &rng, const Interval &range ) {
		const double pick = unit_draw( rng ), u = unit_draw( rng );
		if( pick < 0.01 ) { return u < 0.5 ? range.lo() : range.hi(); }
		if( pick < 0.11 ) {
			const double off = ( u < 0.5 ? 2 * u : 2 * u - 1 ) * 0.01 * range.width();
			return u < 0.5 ? range.clamp( range.lo() + off ) : range.clamp( range.hi() - off );
		}
		return range.clamp( range.lo() + u * range.width() );
	}

	inline std::optional< double > eval( const Combiner &c, double a, double b ) {
		if( !c.defined( a, b ) ) { return std::nullopt; }
		return c( a, b );
	}

	/** Distance from d to the closest value of a * x, x in [b, c], located by bisection. */
	inline std::optional< double > continuity_gap( const Combiner &c, double a, double b, double cc, double d ) {
		double xl = b, xh = cc;
		auto fl = eval( c, a, xl ), fh = eval( c, a, xh );
		if( !fl || !fh ) { return std::nullopt; }
		if( *fl == d || *fh == d ) { return 0.0; }
		const bool increasing = *fl <= *fh;
		for( int i = 0; i < 200; ++i ) {
			const double mid = xl + ( xh - xl ) / 2;
			if( mid <= xl || mid >= xh ) { break; }
			auto fm = eval( c, a, mid );
			if( !fm ) { return std::nullopt; }
			if( *fm == d ) { return 0.0; }
			if( ( *fm < d ) == increasing ) {
				xl = mid;
				fl = fm;
			} else {
				xh = mid;
				fh = fm;
			}
		}
		return std::min( std::abs( *fl - d ), std::abs( *fh - d ) );
	}

	inline std::uint64_t law_seed( std::uint64_t seed, Law law ) {
		return seed * 0x9E3779B97F4A7C15ULL + static_cast< std::uint64_t >( law ) + 1;
	}

} // namespace detail

/**
 * Violation of one law at a witness, or nullopt when the probe touches an
 * undefined pair. The auditor scores samples with this same function.
 */
inline std::optional< double > law_violation( const Combiner &c, Law law, const Witness &w ) {
	using detail::eval;
	const auto [ a, b, cc, d ] = w.x;
	switch( law ) {
		case Law::commutativity: {
			auto ab = eval( c, a, b ), ba = eval( c, b, a );
			if( !ab || !ba ) { return std::nullopt; }
			return std::abs( *ab - *ba );
		}
		case Law::associativity: {
			auto ab = eval( c, a, b ), bc = eval( c, b, cc );
			if( !ab || !bc ) { return std::nullopt; }
			auto left = eval( c, *ab, cc ), right = eval( c, a, *bc );
			if( !left || !right ) { return std::nullopt; }
			return std::abs( *left - *right );
		}
		case Law::monotonicity: {
			auto ab = eval( c, a, b ), ac = eval( c, a, cc ), ba = eval( c, b, a ), ca = eval( c, cc, a );
			if( !ab || !ac || !ba || !ca ) { return std::nullopt; }
			return std::max( { 0.0, *ab - *ac, *ba - *ca } );
		}
		case Law::continuity:
			return detail::continuity_gap( c, a, b, cc, d );
		case Law::identity:
		case Law::annihilator: {
			auto xy = eval( c, a, b ), yx = eval( c, b, a );
			if( !xy || !yx ) { return std::nullopt; }
			const double expect = law == Law::identity ? a : b;
			return std::max( std::abs( *xy - expect ), std::abs( *yx - expect ) );
		}
	}
	return std::nullopt;
}

/** All u with |u*u - u| <= 1e-9 on a uniform grid, plus bisection-refined sign changes. */
inline IdempotentScan find_idempotents( const Combiner &c, std::size_t grid ) {
	grid = std::max< std::size_t >( grid, 2 );
	const Interval &range = c.interval();
	std::vector< double > xs( grid ), phi( grid );
	for( std::size_t i = 0; i < grid; ++i ) {
		xs[ i ] = i + 1 == grid ? range.hi() : range.lo() + range.width() * i / ( grid - 1 );
		phi[ i ] = c( xs[ i ], xs[ i ] ) - xs[ i ];
	}
	IdempotentScan out;
	std::size_t hits = 0;
	for( std::size_t i = 0; i < grid; ++i ) {
		if( std::abs( phi[ i ] ) <= discovery_tolerance ) {
			out.points.push_back( xs[ i ] );
			++hits;
		} else if( i + 1 < grid && std::abs( phi[ i + 1 ] ) > discovery_tolerance &&
			( phi[ i ] < 0 ) != ( phi[ i + 1 ] < 0 ) ) {
			auto map = [&c]( double u ) { return c( u, u ) - u; };
			out.points.push_back( invert_monotone( map, 0.0, xs[ i ], xs[ i + 1 ] ) );
		}
	}
	out.all_idempotent = hits == grid;
	std::sort( out.points.begin(), out.points.end() );
	std::vector< double > dedup;
	for( const double u : out.points ) {
		if( dedup.empty() || u - dedup.back() >= idempotent_dedup_eps ) { dedup.push_back( u ); }
	}
	out.points = std::move( dedup );
	return out;
}

namespace detail {

	inline bool acts_everywhere( const Combiner &c, double u, bool as_identity ) {
		constexpr int probes = 201;
		const Interval &range = c.interval();
		for( int i = 0; i < probes; ++i ) {
			const double a = i + 1 == probes ? range.hi() : range.lo() + range.width() * i / ( probes - 1 );
			auto v = law_violation( c, as_identity ? Law::identity : Law::annihilator, Witness{ { a, u, 0, 0 }, 0 } );
			if( v && *v > discovery_tolerance ) { return false; }
		}
		return true;
	}

	template< typename Probe >
	LawResult run_law( Law law, std::size_t count, double tolerance, unsigned threads, Probe probe ) {
		struct Partial {
			double worst = 0;
			std::optional< Witness > witness;
			std::size_t evaluated = 0, skipped = 0;
		};
		threads = std::max( 1u, std::min< unsigned >( threads, static_cast< unsigned >( std::max< std::size_t >( count, 1 ) ) ) );
		std::vector< Partial > parts( threads );
		auto work = [&]( unsigned t ) {
			Partial &p = parts[ t ];
			const std::size_t begin = count * t / threads, end = count * ( t + 1 ) / threads;
			for( std::size_t i = begin; i < end; ++i ) {
				auto [ w, v ] = probe( i );
				if( !v ) {
					++p.skipped;
					continue;
				}
				++p.evaluated;
				const double score = std::isnan( *v ) ? std::numeric_limits< double >::infinity() : *v;
				if( score > p.worst ) {
					p.worst = score;
					p.witness = w;
				}
			}
		};
		if( threads == 1 ) {
			work( 0 );
		} else {
			std::vector< std::thread > pool;
			for( unsigned t = 0; t < threads; ++t ) { pool.emplace_back( work, t ); }
			for( auto &th : pool ) { th.join(); }
		}
		LawResult out;
		out.law = law;
		out.tolerance = tolerance;
		for( const auto &p : parts ) { // chunks are in index order: strict > keeps the lowest index
			out.evaluated += p.evaluated;
			out.skipped += p.skipped;
			if( p.witness && p.worst > out.max_violation ) {
				out.max_violation = p.worst;
				out.witness = p.witness;
			}
		}
		out.pass = out.max_violation <= tolerance;
		return out;
	}

} // namespace detail

/**
 * Audits commutativity, associativity, monotonicity, continuity and the
 * declared identity and annihilators on seeded random samples. Associativity,
 * commutativity and continuity use tol; the exact laws use 1e-12 slack.
 */
inline PropertyReport check_laws( const Combiner &c, std::size_t samples, double tol, std::uint64_t seed,
	unsigned threads = 1 ) {
	samples = std::max< std::size_t >( samples, 1 );
	const Interval &range = c.interval();
	PropertyReport report;
	report.seed = seed;
	report.samples = samples;

	for( const Law law : all_laws ) {
		std::mt19937_64 rng( detail::law_seed( seed, law ) );
		std::vector< Witness > probes( samples );
		for( std::size_t i = 0; i < samples; ++i ) {
			Witness &w = probes[ i ];
			w.sample_index = i;
			for( std::size_t k = 0; k < 3; ++k ) { w.x[ k ] = detail::sample_value( rng, range ); }
			w.x[ 3 ] = detail::unit_draw( rng );
		}

		if( law == Law::identity || law == Law::annihilator ) {
			std::vector< double > targets;
			if( law == Law::identity && c.identity() ) { targets.push_back( *c.identity() ); }
			if( law == Law::annihilator ) { targets = c.annihilators(); }
			const std::size_t total = samples * targets.size();
			report.laws.push_back( detail::run_law( law, total, exact_law_tolerance, threads, [&]( std::size_t i ) {
				Witness w = probes[ i % samples ];
				w.x[ 1 ] = targets[ i / samples ];
				w.x[ 2 ] = w.x[ 3 ] = 0;
				w.sample_index = i;
				return std::make_pair( w, law_violation( c, law, w ) );
			} ) );
			continue;
		}

		const double law_tol = law == Law::monotonicity ? exact_law_tolerance : tol;
		report.laws.push_back( detail::run_law( law, samples, law_tol, threads, [&]( std::size_t i ) {
			Witness w = probes[ i ];
			if( law == Law::commutativity ) {
				w.x[ 2 ] = w.x[ 3 ] = 0;
			} else if( law == Law::associativity ) {
				w.x[ 3 ] = 0;
			} else {
				if( w.x[ 1 ] > w.x[ 2 ] ) { std::swap( w.x[ 1 ], w.x[ 2 ] ); }
				if( law == Law::monotonicity ) {
					w.x[ 3 ] = 0;
				} else {
					auto lo = detail::eval( c, w.x[ 0 ], w.x[ 1 ] ), hi = detail::eval( c, w.x[ 0 ], w.x[ 2 ] );
					if( !lo || !hi ) { return std::make_pair( w, std::optional< double >() ); }
					w.x[ 3 ] = *lo + w.x[ 3 ] * ( *hi - *lo );
				}
			}
			return std::make_pair( w, law_violation( c, law, w ) );
		} ) );
	}

	report.idempotents = find_idempotents( c, 1001 );
	for( const double u : report.idempotents.points ) {
		if( !report.discovered_identity && detail::acts_everywhere( c, u, true ) ) { report.discovered_identity = u; }
		if( detail::acts_everywhere( c, u, false ) ) { report.discovered_annihilators.push_back( u ); }
	}
	return report;
}

enum class SegmentKind { addition_type, bounded_sum_type };

constexpr const char *to_string( SegmentKind k ) noexcept {
	return k == SegmentKind::addition_type ? "addition_type" : "bounded_sum_type";
}

struct NilpotencyWitness {
	double point;
	unsigned iterations;
};

struct SegmentClassification {
	Segment segment;
	SegmentKind kind;
	std::optional< NilpotencyWitness > witness;
	std::string note;
};

inline constexpr unsigned nilpotency_budget = 64;

/**
 * Self-combines interior probes (w <- w * w) up to budget times. A probe that
 * lands on the annihilator (within 1e-9 of the segment width) in one step from
 * at least 1e-3 away is nilpotent, which makes the segment bounded-sum type.
 * Addition-type segments only approach the annihilator asymptotically.
 */
inline SegmentClassification classify_segment( const Combiner &c, const Segment &seg,
	unsigned budget = nilpotency_budget ) {
	constexpr double landed = 1e-9, far = 1e-3;
	const double z = seg.annihilator(), width = seg.hi() - seg.lo();
	auto distance = [&]( double w ) { return std::abs( w - z ) / width; };
	for( const double t : { 0.5, 0.25, 0.75, 0.1, 0.9 } ) {
		const double probe = seg.identity() + t * ( z - seg.identity() );
		double w = probe;
		for( unsigned k = 1; k <= budget; ++k ) {
			const double next = c( w, w );
			if( distance( next ) <= landed ) {
				if( distance( w ) >= far ) {
					return { seg, SegmentKind::bounded_sum_type, NilpotencyWitness{ probe, k }, "" };
				}
				break;
			}
			w = next;
		}
	}
	return { seg, SegmentKind::addition_type, std::nullopt,
		"no interior nilpotent within " + std::to_string( budget ) + " self-combinations per probe" };
}

/** 1 for r <= 2, r^2 / (4 (r - 1)) above. */
inline double analytic_hamacher_slope( double r ) {
	if( !( r > 0 ) || !std::isfinite( r ) ) {
		throw Error( ErrorKind::NonpositiveParameter, "r = " + detail::fmt( r ) );
	}
	return r <= 2 ? 1.0 : r * r / ( 4 * ( r - 1 ) );
}

struct SlopeEstimate {
	double max_slope = 0;
	double argmax_a = 0;
	double argmax_b = 0;
	double grid_step = 0;
	std::optional< double > analytic;
};

struct DivergenceProbe {
	struct Point {
		double a, b, output;
	};
	double d = 0;
	std::vector< Point > sweep;
	double min_output = 0;
	double max_output = 0;
	double span_fraction = 0;
};

struct RobustnessReport {
	SlopeEstimate slope;
	std::optional< DivergenceProbe > probe;
};

inline constexpr double singular_margin = 1e-6;

/** Forward differences |c(a + step, b) - c(a, b)| / step over a uniform grid. */
inline SlopeEstimate estimate_max_slope( const Combiner &c, double grid_step ) {
	if( !( grid_step > 0 ) ) {
		throw Error( ErrorKind::NonpositiveParameter, "grid step " + detail::fmt( grid_step ) );
	}
	const Interval &range = c.interval();
	const auto n = static_cast< std::size_t >( std::llround( range.width() / grid_step ) );
	auto at = [&]( std::size_t i ) { return i >= n ? range.hi() : range.lo() + static_cast< double >( i ) * grid_step; };
	SlopeEstimate out;
	out.grid_step = grid_step;
	std::vector< std::optional< double > > row( n + 1 );
	for( std::size_t j = 0; j <= n; ++j ) {
		const double b = at( j );
		for( std::size_t i = 0; i <= n; ++i ) {
			const double a = at( i );
			row[ i ] = c.near_excluded( a, b, singular_margin ) ? std::nullopt : detail::eval( c, a, b );
		}
		for( std::size_t i = 0; i < n; ++i ) {
			if( !row[ i ] || !row[ i + 1 ] ) { continue; }
			const double slope = std::abs( *row[ i + 1 ] - *row[ i ] ) / ( at( i + 1 ) - at( i ) );
			if( slope > out.max_slope ) {
				out.max_slope = slope;
				out.argmax_a = at( i );
				out.argmax_b = b;
			}
		}
	}
	return out;
}

/**
 * Sweeps a toward the lower endpoint along a geometric grid and evaluates
 * a * (f(a) + d). For operators joined at the identity through a dual map the
 * outputs cover nearly the whole positive segment however small d is.
 */
inline DivergenceProbe cross_divergence_probe( const Combiner &c, double d, std::size_t approach = 200 ) {
	if( !c.dual_map() || !c.identity() ) {
		throw Error( ErrorKind::DomainMismatch, "divergence probe needs an operator joined through a dual map" );
	}
	if( !( d > 0 ) ) { throw Error( ErrorKind::NonpositiveParameter, "d = " + detail::fmt( d ) ); }
	const DualMap &f = *c.dual_map();
	const double e = *c.identity(), lo = f.negative().lo(), hi = f.positive().hi();
	if( !( hi - d > e ) ) {
		throw Error( ErrorKind::PerturbationTooLarge, "f(a) + d leaves the interval for every a" );
	}
	approach = std::max< std::size_t >( approach, 2 );
	// Smallest offset from lo keeping f(a) + d inside, nudged inward.
	const double eps_min = ( f( hi - d ) - lo ) * ( 1 + 1e-6 );
	const double eps_max = std::max( ( e - lo ) / 2, eps_min );
	DivergenceProbe out;
	out.d = d;
	out.min_output = std::numeric_limits< double >::infinity();
	out.max_output = -std::numeric_limits< double >::infinity();
	for( std::size_t k = 0; k < approach; ++k ) {
		const double eps = eps_max * std::pow( eps_min / eps_max, static_cast< double >( k ) / ( approach - 1 ) );
		const double a = lo + eps;
		if( !( a < e ) ) { continue; }
		const double b = f( a ) + d;
		if( b > hi ) { continue; }
		const double o = c( a, b );
		out.sweep.push_back( { a, b, o } );
		out.min_output = std::min( out.min_output, o );
		out.max_output = std::max( out.max_output, o );
	}
	if( out.sweep.empty() ) {
		throw Error( ErrorKind::PerturbationTooLarge, "f(a) + d leaves the interval for every probed a" );
	}
	const double lo_out = std::clamp( out.min_output, e, hi ), hi_out = std::clamp( out.max_output, e, hi );
	out.span_fraction = ( hi_out - lo_out ) / ( hi - e );
	return out;
}

/**
 * Ground truth for the prior-s rule: builds an explicit two-hypothesis model
 * with P(h) = s and conditionally independent evidence whose likelihood ratios
 * reproduce the given single-evidence posteriors, enumerates the joint table
 * and conditions on all evidence present.
 */
inline double naive_bayes_oracle( const std::vector< double > &posteriors, double s ) {
	if( !( s > 0 && s < 1 ) ) { throw Error( ErrorKind::PriorOutOfRange, "s = " + detail::fmt( s ) ); }
	const std::size_t m = posteriors.size();
	if( m > 24 ) { throw Error( ErrorKind::OutOfRange, "too many posteriors to enumerate" ); }
	std::vector< double > given_h( m ), given_not_h( m );
	for( std::size_t i = 0; i < m; ++i ) {
		const double a = posteriors[ i ];
		if( !( a > 0 && a < 1 ) ) { throw Error( ErrorKind::DegeneratePosterior, detail::fmt( a ) ); }
		const double ratio = ( a / ( 1 - a ) ) * ( ( 1 - s ) / s );
		given_h[ i ] = ratio / ( 1 + ratio );
		given_not_h[ i ] = 1 / ( 1 + ratio );
	}
	const std::size_t configs = std::size_t{ 1 } << m, all_present = configs - 1;
	double joint_h = 0, joint_not_h = 0;
	for( std::size_t cfg = 0; cfg < configs; ++cfg ) {
		double ph = s, pn = 1 - s;
		for( std::size_t i = 0; i < m; ++i ) {
			const bool present = ( cfg >> i ) & 1;
			ph *= present ? given_h[ i ] : 1 - given_h[ i ];
			pn *= present ? given_not_h[ i ] : 1 - given_not_h[ i ];
		}
		if( cfg == all_present ) {
			joint_h += ph;
			joint_not_h += pn;
		}
	}
	return joint_h / ( joint_h + joint_not_h );
}

} // namespace evcomb

#endif // EVCOMB_ANALYSIS_HPP
