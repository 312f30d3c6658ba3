import hashlib
import sqlite3
import logging
from typing import List, Dict, Optional
import os

from config.config import Config
from src.graph_core import Graph, load_graph, serialize_graph


def graph_hash(G: Graph) -> str:
    """sha256 of the graph's text form"""
    return hashlib.sha256(serialize_graph(G).encode('utf-8')).hexdigest()


class Database:
    """
    Result store for ex(n, C_2k) values and pipeline runs
    """

    def __init__(self, db_path: Optional[str] = None):
        self.db_path = db_path or Config.DATABASE_PATH
        self.logger = logging.getLogger(__name__)

        # Create data directory if it doesn't exist
        directory = os.path.dirname(self.db_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        self._init_database()

    def _init_database(self):
        """Initialize database tables"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()

                cursor.execute('''
                    CREATE TABLE IF NOT EXISTS ex_results (
                        id INTEGER PRIMARY KEY AUTOINCREMENT,
                        n INTEGER NOT NULL,
                        k INTEGER NOT NULL,
                        ex INTEGER NOT NULL,
                        witness TEXT NOT NULL,
                        strategy TEXT NOT NULL,
                        timestamp DATETIME DEFAULT CURRENT_TIMESTAMP,
                        UNIQUE(n, k)
                    )
                ''')

                cursor.execute('''
                    CREATE TABLE IF NOT EXISTS pipeline_runs (
                        id INTEGER PRIMARY KEY AUTOINCREMENT,
                        graph_hash TEXT NOT NULL,
                        k INTEGER NOT NULL,
                        d INTEGER NOT NULL,
                        result TEXT NOT NULL,
                        report_json TEXT NOT NULL,
                        timestamp DATETIME DEFAULT CURRENT_TIMESTAMP
                    )
                ''')

                conn.commit()
                self.logger.debug(f"Database initialized at {self.db_path}")

        except sqlite3.Error as e:
            self.logger.error(f"Database initialization error: {e}")
            raise

    def save_ex_result(self, n: int, k: int, ex: int, witness: Graph, strategy: str):
        """
        Save an exact ex(n, C_2k) value with its witness

        Args:
            n (int): Vertex count
            k (int): Cycle half-length
            ex (int): Maximum edge count
            witness (Graph): Extremal C_2k-free graph
            strategy (str): Search strategy that produced it
        """
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()
                cursor.execute('''
                    INSERT OR REPLACE INTO ex_results (n, k, ex, witness, strategy)
                    VALUES (?, ?, ?, ?, ?)
                ''', (n, k, ex, serialize_graph(witness), strategy))
                conn.commit()
                self.logger.info(f"Saved ex({n}, C{2 * k}) = {ex}")

        except sqlite3.Error as e:
            self.logger.error(f"Error saving ex result: {e}")

    def get_ex_result(self, n: int, k: int) -> Optional[Dict]:
        """Cached ex(n, C_2k) row with the witness parsed back, or None"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                conn.row_factory = sqlite3.Row
                cursor = conn.cursor()
                cursor.execute('SELECT * FROM ex_results WHERE n = ? AND k = ?', (n, k))
                row = cursor.fetchone()
                if row is None:
                    return None
                result = dict(row)
                result['witness'] = load_graph(result['witness'])
                return result

        except sqlite3.Error as e:
            self.logger.error(f"Error reading ex result: {e}")
            return None

    def save_pipeline_run(self, G: Graph, k: int, d: int, result: str, report_json: str):
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()
                cursor.execute('''
                    INSERT INTO pipeline_runs (graph_hash, k, d, result, report_json)
                    VALUES (?, ?, ?, ?, ?)
                ''', (graph_hash(G), k, d, result, report_json))
                conn.commit()
                self.logger.debug(f"Saved pipeline run: k={k} d={d} result={result}")

        except sqlite3.Error as e:
            self.logger.error(f"Error saving pipeline run: {e}")

    def get_recent_runs(self, limit: int = 10) -> List[Dict]:
        """
        Get recent pipeline runs, newest first

        Args:
            limit (int): Number of runs to retrieve

        Returns:
            List[Dict]: Recent runs
        """
        try:
            with sqlite3.connect(self.db_path) as conn:
                conn.row_factory = sqlite3.Row
                cursor = conn.cursor()
                cursor.execute('''
                    SELECT * FROM pipeline_runs
                    ORDER BY id DESC
                    LIMIT ?
                ''', (limit,))
                return [dict(row) for row in cursor.fetchall()]

        except sqlite3.Error as e:
            self.logger.error(f"Error getting recent runs: {e}")
            return []
