"""Per-service access control: bearer tokens, IRI-prefix grants.

Grants are prefix patterns over named-graph IRIs (one graph per source
file), capability-separated per query family. Tokens are stored hashed;
the plaintext leaves the process exactly once, when a service is created.
The configured admin token bypasses grant checks.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

from .errors import NotFoundError, ValidationError
from .model import Iri


class Capability(str, Enum):
    READ_GRAPH = "read-graph"
    READ_SPATIAL = "read-spatial"
    READ_TIMESERIES = "read-timeseries"
    RUN_SERVICE = "run-service"


@dataclass(frozen=True)
class Grant:
    graph_pattern: str  # IRI prefix
    capability: Capability

    def __post_init__(self):
        if not self.graph_pattern:
            raise ValidationError("grant needs a non-empty IRI prefix")

    def allows(self, capability: Capability, target_iri: str) -> bool:
        return self.capability is capability \
            and target_iri.startswith(self.graph_pattern)


@dataclass(frozen=True)
class ServiceAccount:
    service_id: str
    token_hash: str
    grants: tuple[Grant, ...]

    def __post_init__(self):
        if not self.service_id:
            raise ValidationError("serviceId must be non-empty")


def hash_token(token: str) -> str:
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


class AccessControl:
    def __init__(self, admin_token: str, state_path: Optional[Path] = None):
        self._admin_hash = hash_token(admin_token)
        self._path = Path(state_path) if state_path else None
        self._lock = threading.RLock()
        self._accounts: dict[str, ServiceAccount] = {}
        if self._path and self._path.exists():
            self._load()

    # -- accounts -----------------------------------------------------------

    def create_service(self, service_id: str) -> str:
        """Register a service and hand back its bearer token (only time)."""
        with self._lock:
            if service_id in self._accounts:
                raise ValidationError(f"service {service_id!r} already exists")
            token = secrets.token_hex(16)
            self._accounts[service_id] = ServiceAccount(
                service_id, hash_token(token), ())
            self._save()
            return token

    def manage_grants(self, service_id: str,
                      grants: list[Grant]) -> ServiceAccount:
        """Replace a service's grant list atomically."""
        with self._lock:
            account = self._accounts.get(service_id)
            if account is None:
                raise NotFoundError(f"unknown service {service_id!r}")
            updated = ServiceAccount(service_id, account.token_hash,
                                     tuple(grants))
            self._accounts[service_id] = updated
            self._save()
            return updated

    def get_account(self, service_id: str) -> ServiceAccount:
        with self._lock:
            account = self._accounts.get(service_id)
            if account is None:
                raise NotFoundError(f"unknown service {service_id!r}")
            return account

    def list_services(self) -> list[str]:
        with self._lock:
            return sorted(self._accounts)

    # -- checks ----------------------------------------------------------------

    def is_admin(self, token: Optional[str]) -> bool:
        return token is not None and hash_token(token) == self._admin_hash

    def resolve(self, token: Optional[str]) -> Optional[ServiceAccount]:
        if token is None:
            return None
        wanted = hash_token(token)
        with self._lock:
            for account in self._accounts.values():
                if account.token_hash == wanted:
                    return account
        return None

    def check_access(self, token: Optional[str], capability: Capability,
                     target_iri) -> bool:
        """Deny-by-default; unknown tokens always deny."""
        if self.is_admin(token):
            return True
        account = self.resolve(token)
        if account is None:
            return False
        target = target_iri.value if isinstance(target_iri, Iri) else str(target_iri)
        return any(g.allows(capability, target) for g in account.grants)

    # -- persistence ----------------------------------------------------------------

    def _save(self) -> None:
        if self._path is None:
            return
        payload = {
            "services": [
                {
                    "serviceId": a.service_id,
                    "tokenHash": a.token_hash,
                    "grants": [
                        {"graphPattern": g.graph_pattern,
                         "capability": g.capability.value}
                        for g in a.grants
                    ],
                }
                for a in sorted(self._accounts.values(),
                                key=lambda a: a.service_id)
            ]
        }
        tmp = self._path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
        os.replace(tmp, self._path)

    def _load(self) -> None:
        with open(self._path, encoding="utf-8") as fh:
            payload = json.load(fh)
        for entry in payload.get("services", []):
            grants = tuple(
                Grant(g["graphPattern"], Capability(g["capability"]))
                for g in entry.get("grants", []))
            account = ServiceAccount(entry["serviceId"], entry["tokenHash"],
                                     grants)
            self._accounts[account.service_id] = account
