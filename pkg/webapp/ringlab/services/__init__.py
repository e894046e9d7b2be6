"""
Services package for the ring circuit simulator.

Re-exports the public names so views and commands can use
`from .. import services` and `services.XYZ`.
"""

from .errors import (
    RingSimError,
    CircuitError,
    PathError,
    PortError,
    SweepError,
    OutOfBandError,
    FixtureError,
    CircuitFileError,
)

from .circuit import (
    DEFAULT_PHASE_TOLERANCE,
    ROOK,
    KING,
    INPUT,
    OUTPUT,
    PhaseAngle,
    FrequencyChannel,
    MeshNode,
    Mesh,
    PortConfig,
    ElectricPart,
    RingCircuit,
    Path,
    build_mesh,
    make_ports,
    format_pi,
    wrap_distance,
    validate_path,
    accumulated_phase,
    path_length_l0,
)

from .engine import (
    PARAM_PHASE,
    PARAM_GAIN,
    ResonantPath,
    SensorGrid,
    SweepRecord,
    SweepReport,
    enumerate_paths,
    all_port_paths,
    find_resonant_paths,
    sensor_readout,
    sweep_phase,
    sweep_gain,
)

from .rounds import AmplitudeTrace, simulate_rounds

from .dispersion import (
    MSSW,
    BVMSW,
    SpinWaveMedium,
    YIG_DELAY_LINE_1,
    YIG_DELAY_LINE_2,
    frequency_at,
    wavenumber_for,
    band_limits,
    phase_over_length,
    dispersion_table,
)

from .problems import (
    DEFAULT_PRIMES,
    PHASE_MATCH,
    SHORTEST,
    SHORTEST_VIA_NODES,
    FIXTURES,
    FactorizationDevice,
    MeshProblem,
    ShortestSolution,
    build_block_chain,
    build_two_path_circuit,
    build_factorization_device,
    run_factorization,
    factorize,
    decode_route,
    build_mesh_problem,
    solve_shortest,
    assign_channels,
)

from .capacity import (
    CapacityReport,
    corner_path_count,
    total_path_count,
    port_combinations,
    instruction_count,
    functional_throughput,
    monotone_lattice_paths,
    memory_comparison,
)

from .data import (
    load_circuit,
    load_problem,
    save_circuit,
    load_fixture,
    list_fixtures,
    parse_phase,
)

from .runner import (
    SOLVED,
    NO_RESONANCE,
    ERROR,
    COMMANDS,
    RunManifest,
    RunResult,
    apply_tolerance,
    load_source,
    run,
)
