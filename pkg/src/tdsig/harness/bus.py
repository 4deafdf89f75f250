"""
In-process message bus. The default bus is a deterministic single-threaded
FIFO loop; ThreadedMessageBus runs every party on its own thread with the bus
queues as the only channel between them.
"""
import logging
import queue
import threading
from collections import deque
from typing import Callable, Dict, Iterable, List, Optional

from tdsig.errors import CeremonyError, ConfigError, TdsigError
from tdsig.harness.messages import BROADCAST, Envelope, PartyId, Role

logger = logging.getLogger(__name__)

Interceptor = Callable[[Envelope], Optional[Envelope]]


class MessageBus:
    def __init__(self, interceptors: Iterable[Interceptor] = ()):
        self.parties: Dict[PartyId, object] = {}
        self.transcript: List[Envelope] = []
        self.interceptors = list(interceptors)
        self._queue = deque()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def register(self, party):
        if party.party_id in self.parties:
            raise ConfigError(f"party {party.party_id} registered twice")
        self.parties[party.party_id] = party

    def recipients(self, envelope: Envelope) -> List[PartyId]:
        if envelope.to == BROADCAST:
            # fan out to every roster member and the combiner
            return [
                party_id for party_id in self.parties
                if party_id != envelope.sender and party_id.role in (Role.SIGNER, Role.COMBINER)
            ]
        if envelope.to not in self.parties:
            raise ConfigError(f"no party registered as {envelope.to}")
        return [envelope.to]

    def _intercept(self, envelope: Envelope) -> Optional[Envelope]:
        for intercept in self.interceptors:
            envelope = intercept(envelope)
            if envelope is None:
                return None
        return envelope

    def send(self, envelope: Envelope):
        envelope = self._intercept(envelope)
        if envelope is None:
            logger.debug("envelope dropped in flight")
            return
        self.transcript.append(envelope)
        self._queue.append(envelope)

    def _deliver(self, party_id: PartyId, envelope: Envelope):
        party = self.parties[party_id]
        self._call(party, envelope.phase.value, lambda: party.receive(envelope, self))

    def _call(self, party, phase: str, step: Callable[[], None]):
        try:
            with party.lock:
                step()
        except CeremonyError:
            raise
        except TdsigError as e:
            raise CeremonyError(str(party.party_id), phase, str(e)) from e

    def act(self, party, phase: str, step: Callable[[object], None]):
        """Run a party-initiated step (dealing, starting round 1, presenting a signature)."""
        self._call(party, phase, lambda: step(party))

    def run(self):
        while self._queue:
            envelope = self._queue.popleft()
            for party_id in self.recipients(envelope):
                self._deliver(party_id, envelope)

    def close(self):
        pass


_STOP = object()


class ThreadedMessageBus(MessageBus):
    def __init__(self, interceptors: Iterable[Interceptor] = ()):
        super().__init__(interceptors)
        self._inboxes: Dict[PartyId, queue.Queue] = {}
        self._threads: List[threading.Thread] = []
        self._pending = 0
        self._errors: List[Exception] = []
        self._cond = threading.Condition()

    def register(self, party):
        super().register(party)
        inbox = queue.Queue()
        self._inboxes[party.party_id] = inbox
        thread = threading.Thread(target=self._worker, args=(party.party_id, inbox),
                                  name=f"party-{party.party_id}", daemon=True)
        self._threads.append(thread)
        thread.start()

    def send(self, envelope: Envelope):
        envelope = self._intercept(envelope)
        if envelope is None:
            logger.debug("envelope dropped in flight")
            return
        with self._cond:
            self.transcript.append(envelope)
            targets = self.recipients(envelope)
            self._pending += len(targets)
        for party_id in targets:
            self._inboxes[party_id].put(envelope)

    def _worker(self, party_id: PartyId, inbox: queue.Queue):
        while True:
            envelope = inbox.get()
            if envelope is _STOP:
                return
            try:
                self._deliver(party_id, envelope)
            except Exception as e:
                with self._cond:
                    self._errors.append(e)
            finally:
                with self._cond:
                    self._pending -= 1
                    self._cond.notify_all()

    def run(self):
        with self._cond:
            self._cond.wait_for(lambda: self._pending == 0)
            if self._errors:
                raise self._errors[0]

    def close(self):
        for inbox in self._inboxes.values():
            inbox.put(_STOP)
        for thread in self._threads:
            thread.join()
