import os


class State:
    interrupted = False
    threads = 1
    rank_cache_enabled = True

    def interrupt(self):
        self.interrupted = True

    def recover(self):
        self.interrupted = False

    def set_threads(self, threads):
        threads = int(threads or 0)
        if threads <= 0:
            threads = os.cpu_count() or 1
        self.threads = threads
        return threads


state = State()
