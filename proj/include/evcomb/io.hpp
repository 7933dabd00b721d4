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
 * File formats: the JSON operator spec, the evidence CSV
 * (hypothesis,evidence,value) and the JSON report and results documents.
 */

#ifndef EVCOMB_IO_HPP
#define EVCOMB_IO_HPP

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "analysis.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "operators.hpp"

namespace evcomb {

inline constexpr const char *tool_name = "evcomb";
inline constexpr const char *tool_version = "0.1.0";

using json = nlohmann::json;

namespace detail {

	inline void reject_unknown( const json &j, const std::set< std::string > &known, const std::string &where,
		std::vector< std::string > &problems ) {
		for( const auto &item : j.items() ) {
			if( !known.count( item.key() ) ) { problems.push_back( where + item.key() + ": unknown field" ); }
		}
	}

	inline std::optional< double > number_field( const json &j, const char *key, const std::string &where,
		std::vector< std::string > &problems ) {
		if( !j.contains( key ) ) { return std::nullopt; }
		const json &v = j.at( key );
		if( !v.is_number() ) {
			problems.push_back( where + key + ": expected a number" );
			return std::nullopt;
		}
		return v.get< double >();
	}

} // namespace detail

/** Parses the structured spec document. Unknown fields are rejected. */
inline OperatorSpec parse_operator_spec( const json &j ) {
	std::vector< std::string > problems;
	OperatorSpec spec;
	if( !j.is_object() ) { throw Error( ErrorKind::SpecInvalid, "operator spec must be a JSON object" ); }
	detail::reject_unknown( j,
		{ "family", "r", "p", "s", "z", "range", "identity", "idempotents", "segments", "cross" }, "", problems );

	if( !j.contains( "family" ) || !j.at( "family" ).is_string() ) {
		problems.push_back( "family: required string" );
	} else if( auto f = parse_family( j.at( "family" ).get< std::string >() ) ) {
		spec.family = *f;
	} else {
		problems.push_back( "family: unknown family '" + j.at( "family" ).get< std::string >() + "'" );
	}
	spec.r = detail::number_field( j, "r", "", problems );
	spec.p = detail::number_field( j, "p", "", problems );
	spec.s = detail::number_field( j, "s", "", problems );
	spec.z = detail::number_field( j, "z", "", problems );
	spec.identity = detail::number_field( j, "identity", "", problems );

	if( j.contains( "range" ) ) {
		const json &r = j.at( "range" );
		if( !r.is_array() || r.size() != 2 || !r[ 0 ].is_number() || !r[ 1 ].is_number() ) {
			problems.push_back( "range: expected [lo, hi]" );
		} else {
			spec.range = std::make_pair( r[ 0 ].get< double >(), r[ 1 ].get< double >() );
		}
	}
	if( j.contains( "idempotents" ) ) {
		const json &u = j.at( "idempotents" );
		if( !u.is_array() ) {
			problems.push_back( "idempotents: expected an array of numbers" );
		} else {
			for( const auto &x : u ) {
				if( !x.is_number() ) {
					problems.push_back( "idempotents: expected an array of numbers" );
					break;
				}
				spec.idempotents.push_back( x.get< double >() );
			}
		}
	}
	if( j.contains( "segments" ) ) {
		const json &segs = j.at( "segments" );
		if( !segs.is_array() ) {
			problems.push_back( "segments: expected an array of objects" );
		} else {
			for( std::size_t i = 0; i < segs.size(); ++i ) {
				const std::string where = "segments[" + std::to_string( i ) + "].";
				const json &s = segs[ i ];
				if( !s.is_object() ) {
					problems.push_back( where + ": expected an object" );
					continue;
				}
				detail::reject_unknown( s, { "family", "r", "p" }, where, problems );
				SegmentRuleSpec rule;
				if( !s.contains( "family" ) || !s.at( "family" ).is_string() ) {
					problems.push_back( where + "family: required string" );
				} else {
					rule.family = s.at( "family" ).get< std::string >();
				}
				rule.r = detail::number_field( s, "r", where, problems );
				rule.p = detail::number_field( s, "p", where, problems );
				spec.segments.push_back( rule );
			}
		}
	}
	if( j.contains( "cross" ) ) {
		const json &c = j.at( "cross" );
		if( c == "signed_generator" ) {
			spec.cross = CrossRule::signed_generator;
		} else if( c == "additive" ) {
			spec.cross = CrossRule::additive;
		} else {
			problems.push_back( "cross: expected \"signed_generator\" or \"additive\"" );
		}
	}

	if( problems.empty() ) { problems = validate_spec( spec ); }
	if( !problems.empty() ) {
		std::string msg;
		for( const auto &p : problems ) { msg += ( msg.empty() ? "" : "; " ) + p; }
		throw Error( ErrorKind::SpecInvalid, msg );
	}
	return spec;
}

inline json to_json( const OperatorSpec &spec ) {
	json j{ { "family", to_string( spec.family ) } };
	if( spec.r ) { j[ "r" ] = *spec.r; }
	if( spec.p ) { j[ "p" ] = *spec.p; }
	if( spec.s ) { j[ "s" ] = *spec.s; }
	if( spec.z ) { j[ "z" ] = *spec.z; }
	if( spec.range ) { j[ "range" ] = { spec.range->first, spec.range->second }; }
	if( spec.identity ) { j[ "identity" ] = *spec.identity; }
	if( !spec.idempotents.empty() ) { j[ "idempotents" ] = spec.idempotents; }
	if( !spec.segments.empty() ) {
		json segs = json::array();
		for( const auto &rule : spec.segments ) {
			json s{ { "family", rule.family } };
			if( rule.r ) { s[ "r" ] = *rule.r; }
			if( rule.p ) { s[ "p" ] = *rule.p; }
			segs.push_back( s );
		}
		j[ "segments" ] = segs;
	}
	if( spec.cross ) { j[ "cross" ] = *spec.cross == CrossRule::signed_generator ? "signed_generator" : "additive"; }
	return j;
}

/** Accepts inline JSON (first non-blank character '{') or a path to a JSON file. */
inline OperatorSpec load_operator_spec( const std::string &text_or_path ) {
	const auto first = text_or_path.find_first_not_of( " \t\r\n" );
	std::string text;
	if( first != std::string::npos && text_or_path[ first ] == '{' ) {
		text = text_or_path;
	} else {
		std::ifstream in( text_or_path );
		if( !in ) { throw Error( ErrorKind::MalformedInput, "cannot read operator spec '" + text_or_path + "'" ); }
		std::ostringstream ss;
		ss << in.rdbuf();
		text = ss.str();
	}
	json j;
	try {
		j = json::parse( text );
	} catch( const json::parse_error &err ) {
		throw Error( ErrorKind::SpecInvalid, std::string( "not valid JSON: " ) + err.what() );
	}
	return parse_operator_spec( j );
}

struct EvidenceRow {
	std::string hypothesis;
	std::string evidence;
	double value;
	std::size_t row; ///< 1-based data row number (the header is row 0)
};

namespace detail {

	inline std::string trim( const std::string &s ) {
		const auto b = s.find_first_not_of( " \t\r" );
		if( b == std::string::npos ) { return ""; }
		const auto e = s.find_last_not_of( " \t\r" );
		return s.substr( b, e - b + 1 );
	}

	inline std::vector< std::string > split_csv( const std::string &line ) {
		std::vector< std::string > out;
		std::string cell;
		std::istringstream ss( line );
		while( std::getline( ss, cell, ',' ) ) { out.push_back( trim( cell ) ); }
		if( !line.empty() && line.back() == ',' ) { out.emplace_back(); }
		return out;
	}

} // namespace detail

/** Reads `hypothesis,evidence,value` rows; blank lines are ignored. */
inline std::vector< EvidenceRow > parse_evidence_csv( std::istream &in ) {
	std::vector< EvidenceRow > rows;
	std::string line;
	bool header = false;
	std::size_t row = 0;
	while( std::getline( in, line ) ) {
		if( detail::trim( line ).empty() ) { continue; }
		const auto cells = detail::split_csv( line );
		if( !header ) {
			if( cells != std::vector< std::string >{ "hypothesis", "evidence", "value" } ) {
				throw Error( ErrorKind::MalformedInput, "row 0: header must be 'hypothesis,evidence,value'" );
			}
			header = true;
			continue;
		}
		++row;
		const std::string where = "row " + std::to_string( row ) + ": ";
		if( cells.size() != 3 ) { throw Error( ErrorKind::MalformedInput, where + "expected 3 fields" ); }
		if( cells[ 0 ].empty() || cells[ 1 ].empty() ) {
			throw Error( ErrorKind::MalformedInput, where + "empty hypothesis or evidence id" );
		}
		double v = 0;
		const std::string &text = cells[ 2 ];
		const auto [ ptr, ec ] = std::from_chars( text.data(), text.data() + text.size(), v );
		if( ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite( v ) ) {
			throw Error( ErrorKind::MalformedInput, where + "value '" + text + "' is not a decimal number" );
		}
		rows.push_back( { cells[ 0 ], cells[ 1 ], v, row } );
	}
	return rows;
}

inline json tool_header( const char *kind, const OperatorSpec &spec ) {
	return json{ { "tool", tool_name }, { "version", tool_version }, { "kind", kind }, { "operator", to_json( spec ) } };
}

namespace detail {

	inline json optional_number( const std::optional< double > &x ) {
		return x ? json( *x ) : json( nullptr );
	}

	/** Segments between consecutive idempotents (endpoints included), oriented by annihilator or identity. */
	inline std::vector< Segment > discovered_segments( const Combiner &c, const PropertyReport &report ) {
		std::vector< double > cuts{ c.interval().lo() };
		for( const double u : report.idempotents.points ) {
			if( u - cuts.back() >= idempotent_dedup_eps && c.interval().hi() - u >= idempotent_dedup_eps ) {
				cuts.push_back( u );
			}
		}
		cuts.push_back( c.interval().hi() );
		auto is_annihilator = [&]( double x ) {
			for( const double z : report.discovered_annihilators ) {
				if( std::abs( z - x ) < idempotent_dedup_eps ) { return true; }
			}
			return false;
		};
		std::vector< Segment > out;
		for( std::size_t i = 0; i + 1 < cuts.size(); ++i ) {
			Side side = Side::positive;
			if( is_annihilator( cuts[ i ] ) && !is_annihilator( cuts[ i + 1 ] ) ) {
				side = Side::negative;
			} else if( !is_annihilator( cuts[ i + 1 ] ) && report.discovered_identity &&
				cuts[ i + 1 ] <= *report.discovered_identity ) {
				side = Side::negative;
			}
			out.emplace_back( cuts[ i ], cuts[ i + 1 ], side );
		}
		return out;
	}

} // namespace detail

/** The check document: law results, idempotent structure and segment classification. */
inline json property_report_json( const OperatorSpec &spec, const Combiner &c, const PropertyReport &report ) {
	json j = tool_header( "property_report", spec );
	j[ "seed" ] = report.seed;
	j[ "samples" ] = report.samples;
	j[ "pass" ] = report.pass();
	json laws = json::array();
	for( const auto &r : report.laws ) {
		json law{ { "law", to_string( r.law ) }, { "pass", r.pass }, { "max_violation", r.max_violation },
			{ "tolerance", r.tolerance }, { "evaluated", r.evaluated }, { "skipped", r.skipped } };
		law[ "witness" ] = r.witness && r.max_violation > 0
			? json{ { "x", r.witness->x }, { "sample_index", r.witness->sample_index } }
			: json( nullptr );
		laws.push_back( law );
	}
	j[ "laws" ] = laws;

	json idem{ { "all_idempotent", report.idempotents.all_idempotent },
		{ "count", report.idempotents.points.size() } };
	if( report.idempotents.all_idempotent ) {
		idem[ "note" ] = "every grid point is idempotent: max above and min below each joint";
	} else {
		idem[ "points" ] = report.idempotents.points;
	}
	j[ "idempotents" ] = idem;
	j[ "discovered_identity" ] = detail::optional_number( report.discovered_identity );
	j[ "discovered_annihilators" ] = report.discovered_annihilators;

	json segs = json::array();
	if( !report.idempotents.all_idempotent ) {
		for( const Segment &seg : detail::discovered_segments( c, report ) ) {
			const SegmentClassification cls = classify_segment( c, seg );
			json s{ { "segment", { seg.lo(), seg.hi() } },
				{ "side", seg.side() == Side::positive ? "positive" : "negative" },
				{ "kind", to_string( cls.kind ) } };
			s[ "witness" ] = cls.witness
				? json{ { "point", cls.witness->point }, { "iterations", cls.witness->iterations } }
				: json( nullptr );
			if( !cls.note.empty() ) { s[ "note" ] = cls.note; }
			segs.push_back( s );
		}
	}
	j[ "segments" ] = segs;
	return j;
}

inline json robustness_report_json( const OperatorSpec &spec, const RobustnessReport &report ) {
	json j = tool_header( "robustness_report", spec );
	const SlopeEstimate &s = report.slope;
	j[ "grid_step" ] = s.grid_step;
	j[ "slope" ] = json{ { "max_slope", s.max_slope }, { "argmax", { s.argmax_a, s.argmax_b } },
		{ "analytic", detail::optional_number( s.analytic ) } };
	if( report.probe ) {
		const DivergenceProbe &p = *report.probe;
		json sweep = json::array();
		for( const auto &pt : p.sweep ) { sweep.push_back( { pt.a, pt.b, pt.output } ); }
		j[ "probe" ] = json{ { "d", p.d }, { "points", p.sweep.size() }, { "min_output", p.min_output },
			{ "max_output", p.max_output }, { "span_fraction", p.span_fraction }, { "sweep", sweep } };
	} else {
		j[ "probe" ] = nullptr;
	}
	return j;
}

inline json fold_results_json( const OperatorSpec &spec, const std::vector< HypothesisResult > &results ) {
	json j = tool_header( "fold_results", spec );
	json rs = json::array();
	for( const auto &r : results ) {
		json trace = json::array();
		for( const auto &t : r.trace ) {
			trace.push_back( { { "evidence", t.evidence }, { "value", t.value }, { "running", t.running } } );
		}
		rs.push_back( { { "hypothesis", r.id }, { "value", r.value }, { "count", r.count }, { "trace", trace } } );
	}
	j[ "results" ] = rs;
	return j;
}

} // namespace evcomb

#endif // EVCOMB_IO_HPP
