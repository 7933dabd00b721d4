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

// evcomb: build, fold, audit and stress evidence-combination operators.
//
// Exit codes: 0 success, 1 usage/spec/input/undefined-pair error,
// 2 law violation found by `check`.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evcomb/evcomb.hpp"

namespace {

using evcomb::json;

struct Options {
	std::string op;
	std::vector< double > values;
	std::string input;
	std::string output;
	std::vector< std::string > hypotheses;
	std::size_t samples = 10000;
	double tol = 1e-9;
	std::uint64_t seed = 0;
	double grid_step = 1e-3;
	double d = 1e-3;
	unsigned threads = 1;
	bool timestamp = false;
};

void emit( const Options &opt, json doc ) {
	if( opt.timestamp ) {
		const auto now = std::chrono::system_clock::to_time_t( std::chrono::system_clock::now() );
		char buf[ 32 ];
		std::strftime( buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime( &now ) );
		doc[ "generated_at" ] = buf;
	}
	const std::string text = doc.dump( 2 ) + "\n";
	if( opt.output.empty() || opt.output == "-" ) {
		std::cout << text;
		return;
	}
	std::ofstream out( opt.output );
	if( !out || !( out << text ) ) {
		throw evcomb::Error( evcomb::ErrorKind::MalformedInput, "cannot write '" + opt.output + "'" );
	}
}

int run_combine( const Options &opt ) {
	const evcomb::Combiner c = evcomb::build_operator( evcomb::load_operator_spec( opt.op ) );
	const double v = evcomb::fold_evidence( c, opt.values );
	std::printf( "%.15g\n", v );
	return 0;
}

int run_fold( const Options &opt ) {
	const evcomb::OperatorSpec spec = evcomb::load_operator_spec( opt.op );
	const evcomb::Combiner c = evcomb::build_operator( spec );
	std::ifstream in( opt.input );
	if( !in ) { throw evcomb::Error( evcomb::ErrorKind::MalformedInput, "cannot read '" + opt.input + "'" ); }
	const auto rows = evcomb::parse_evidence_csv( in );

	std::vector< evcomb::HypothesisModel > models;
	std::vector< std::vector< std::string > > observed;
	std::map< std::string, std::size_t > index;
	auto model_for = [&]( const std::string &id ) -> std::size_t {
		auto [ it, fresh ] = index.emplace( id, models.size() );
		if( fresh ) {
			models.push_back( { id, {}, spec } );
			observed.emplace_back();
		}
		return it->second;
	};
	for( const auto &h : opt.hypotheses ) { model_for( h ); }
	for( const auto &row : rows ) {
		const std::string where = "row " + std::to_string( row.row ) + ": ";
		if( !c.interval().contains( row.value ) ) {
			throw evcomb::Error( evcomb::ErrorKind::OutOfRange,
				where + "value " + evcomb::detail::fmt( row.value ) + " not in " + c.interval().str() );
		}
		const std::size_t m = model_for( row.hypothesis );
		auto [ it, fresh ] = models[ m ].base.emplace( row.evidence, row.value );
		if( !fresh && it->second != row.value ) {
			throw evcomb::Error( evcomb::ErrorKind::MalformedInput,
				where + "evidence '" + row.evidence + "' repeated with a different value" );
		}
		observed[ m ].push_back( row.evidence );
	}
	emit( opt, evcomb::fold_results_json( spec, evcomb::evaluate_batch( models, observed ) ) );
	return 0;
}

int run_check( const Options &opt ) {
	const evcomb::OperatorSpec spec = evcomb::load_operator_spec( opt.op );
	const evcomb::Combiner c = evcomb::build_operator( spec );
	const evcomb::PropertyReport report = evcomb::check_laws( c, opt.samples, opt.tol, opt.seed, opt.threads );
	emit( opt, evcomb::property_report_json( spec, c, report ) );
	return report.pass() ? 0 : 2;
}

int run_robustness( const Options &opt ) {
	const evcomb::OperatorSpec spec = evcomb::load_operator_spec( opt.op );
	const evcomb::Combiner c = evcomb::build_operator( spec );
	evcomb::RobustnessReport report;
	report.slope = evcomb::estimate_max_slope( c, opt.grid_step );
	if( spec.family == evcomb::Family::hamacher ) {
		report.slope.analytic = evcomb::analytic_hamacher_slope( *spec.r );
	} else if( spec.family == evcomb::Family::bernoulli ) {
		report.slope.analytic = evcomb::analytic_hamacher_slope( 1.0 );
	}
	if( c.dual_map() ) { report.probe = evcomb::cross_divergence_probe( c, opt.d ); }
	emit( opt, evcomb::robustness_report_json( spec, report ) );
	return 0;
}

} // namespace

int main( int argc, char **argv ) {
	CLI::App app{ "Associative evidence-combination operators: combine, fold, check, robustness" };
	app.require_subcommand( 1 );
	app.set_version_flag( "--version", std::string( evcomb::tool_version ) );
	Options opt;

	auto add_operator = [&]( CLI::App *sub ) {
		sub->add_option( "--operator", opt.op, "Operator spec: inline JSON or path to a JSON file" )->required();
	};
	auto add_output = [&]( CLI::App *sub ) {
		sub->add_option( "--output", opt.output, "Report path (default: stdout)" );
		sub->add_flag( "--timestamp", opt.timestamp, "Add a generated_at field to the document" );
	};

	CLI::App *combine = app.add_subcommand( "combine", "Fold values through the operator and print the result" );
	add_operator( combine );
	combine->add_option( "values", opt.values, "Evidence evaluations, folded left to right" )->required();

	CLI::App *fold = app.add_subcommand( "fold", "Evaluate hypotheses from an evidence CSV" );
	add_operator( fold );
	fold->add_option( "--input", opt.input, "CSV with header hypothesis,evidence,value" )->required();
	fold->add_option( "--hypothesis", opt.hypotheses, "Declare a hypothesis even without evidence rows" );
	add_output( fold );

	CLI::App *check = app.add_subcommand( "check", "Audit the semigroup laws on seeded samples" );
	add_operator( check );
	check->add_option( "--samples", opt.samples, "Samples per law" )->capture_default_str();
	check->add_option( "--tol", opt.tol, "Tolerance for associativity, commutativity, continuity" )->capture_default_str();
	check->add_option( "--seed", opt.seed, "Sampling seed" )->capture_default_str();
	check->add_option( "--threads", opt.threads, "Worker threads (results do not depend on it)" )->capture_default_str();
	add_output( check );

	CLI::App *robust = app.add_subcommand( "robustness", "Estimate the maximum slope and probe cross divergence" );
	add_operator( robust );
	robust->add_option( "--grid-step", opt.grid_step, "Finite-difference grid step" )->capture_default_str();
	robust->add_option( "--d", opt.d, "Perturbation for the divergence probe" )->capture_default_str();
	add_output( robust );

	try {
		app.parse( argc, argv );
	} catch( const CLI::ParseError &err ) {
		const int code = app.exit( err );
		return code == 0 ? 0 : 1;
	}

	try {
		if( *combine ) { return run_combine( opt ); }
		if( *fold ) { return run_fold( opt ); }
		if( *check ) { return run_check( opt ); }
		return run_robustness( opt );
	} catch( const std::exception &err ) {
		std::cerr << "evcomb: " << err.what() << "\n";
		return 1;
	}
}
