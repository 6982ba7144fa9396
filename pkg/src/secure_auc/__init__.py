"""Secure AUROC and AUPR computation over the test samples of several data owners
with three non-colluding servers.
"""

from secure_auc.config import SessionConfig
from secure_auc.owner import OwnerDataset, ingest_csv, outsource, decode_result
from secure_auc.session import (
    run_in_process,
    run_servers_in_process,
    run_tcp_party,
)
from secure_auc.coverage import create_session_matrix, shuffle_session_matrix
from secure_auc.experiments import (
    auc_stability,
    benchmark_session,
    run_session_matrix,
    scalability_settings,
)
